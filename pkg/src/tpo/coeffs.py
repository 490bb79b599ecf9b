"""
A formal coefficient ring for class functions: polynomials with exact
rational coefficients in indeterminates ``t_v``, ``v ∈ (Z/p^N)^n``, on which
an isogeny ``A`` acts by the ring endomorphism ``t_v ↦ t_{Aᵀv mod p^N}``.
"""
__all__ = [
    'CoeffValue',
    'Monomial',
    'coeff_act',
]

from fractions import Fraction
from typing import (
    Any,
    Dict as DictType,
    Iterable,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .utils import mat_vec


Monomial = Tuple[Tuple[Tuple[int, ...], int], ...]
Scalar = Union[int, Fraction]


def _monomial(powers: Mapping[Tuple[int, ...], int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in powers.items() if e))


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    powers: DictType[Tuple[int, ...], int] = dict(a)
    for v, e in b:
        powers[v] = powers.get(v, 0) + e
    return _monomial(powers)


class CoeffValue:
    """
    A sparse polynomial: a map from monomials (sorted ``(v, exponent)``
    pairs) to nonzero ``Fraction`` coefficients.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms: Union[Mapping[Monomial, Scalar], Iterable[Tuple[Monomial, Scalar]]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: DictType[Monomial, Fraction] = {}
        for mono, c in items:
            mono = _monomial_mul((), tuple(mono))
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(c)
        self._terms = {mono: c for mono, c in acc.items() if c}

    @classmethod
    def constant(cls, c: Scalar) -> 'CoeffValue':
        return cls({(): c})

    @classmethod
    def variable(cls, v: Sequence[int], modulus: Optional[int] = None) -> 'CoeffValue':
        """
        The indeterminate ``t_v``; with a modulus ``v`` is first reduced to
        its representative in ``[0, modulus)^n``.
        """
        if modulus is not None:
            v = tuple(int(x) % modulus for x in v)
        return cls({((tuple(v), 1),): 1})

    @classmethod
    def zero(cls) -> 'CoeffValue':
        return cls()

    @classmethod
    def one(cls) -> 'CoeffValue':
        return cls.constant(1)

    @property
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(sorted({v for mono in self._terms for v, _ in mono}))

    @staticmethod
    def _lift(x: Union['CoeffValue', Scalar]) -> 'CoeffValue':
        return x if isinstance(x, CoeffValue) else CoeffValue.constant(x)

    def __add__(self, other: Union['CoeffValue', Scalar]) -> 'CoeffValue':
        other = self._lift(other)
        return CoeffValue(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> 'CoeffValue':
        return CoeffValue({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other: Union['CoeffValue', Scalar]) -> 'CoeffValue':
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalar) -> 'CoeffValue':
        return self._lift(other) - self

    def __mul__(self, other: Union['CoeffValue', Scalar]) -> 'CoeffValue':
        other = self._lift(other)
        return CoeffValue(
            (_monomial_mul(a, b), c * d)
            for a, c in self._terms.items()
            for b, d in other._terms.items()
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> 'CoeffValue':
        if e < 0:
            raise ValueError('Negative powers are not defined, got {}'.format(e))
        result = CoeffValue.one()
        for _ in range(e):
            result = result * self
        return result

    def __truediv__(self, c: Scalar) -> 'CoeffValue':
        c = Fraction(c)
        return CoeffValue({mono: a / c for mono, a in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CoeffValue.constant(other)
        if not isinstance(other, CoeffValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def to_dict(self) -> DictType[str, Any]:
        return {
            'terms': [
                {'coeff': str(c), 'monomial': [[list(v), e] for v, e in mono]}
                for mono, c in self.terms
            ]
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> 'CoeffValue':
        return cls(
            (tuple((tuple(v), e) for v, e in term['monomial']), Fraction(term['coeff']))
            for term in d['terms']
        )

    def __repr__(self) -> str:
        if not self._terms:
            return '0'
        out = []
        for mono, c in self.terms:
            factors = ['t{}^{}'.format(v, e) if e > 1 else 't{}'.format(v) for v, e in mono]
            if not factors:
                out.append(str(c))
            elif c == 1:
                out.append('*'.join(factors))
            else:
                out.append('{}*{}'.format(c, '*'.join(factors)))
        return ' + '.join(out)


def coeff_act(a: Any, x: CoeffValue) -> CoeffValue:
    """
    The action ``φ*`` of an isogeny on coefficients, substituting
    ``t_v ↦ t_{Aᵀv mod p^N}``. It is a ring map and ``(ψ∘φ)* = φ*∘ψ*``.

    :param a: An isogeny
    :type a: Isogeny

    :param x: The coefficient
    :type x: CoeffValue

    :return: The image
    :rtype: CoeffValue
    """
    q = a.ctx.modulus
    dual = a.dual
    images: DictType[Tuple[int, ...], Tuple[int, ...]] = {}

    def image(v: Tuple[int, ...]) -> Tuple[int, ...]:
        if v not in images:
            images[v] = tuple(c % q for c in mat_vec(dual, v))
        return images[v]

    return CoeffValue(
        (tuple((image(v), e) for v, e in mono), c)
        for mono, c in x.terms
    )
