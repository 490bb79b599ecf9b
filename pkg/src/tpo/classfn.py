"""
Class functions on ``hom(Λ, G)`` modulo conjugation, valued in the formal
coefficient ring of ``tpo.coeffs``, and the operations between them:
restriction, transfer, isogeny twists, external products, the total power
operation with its quotients by the transfer ideal, Adams operations and the
action of ``Aut(Λ*)``.
"""
__all__ = [
    'ClassFunction',
    'ClassFunctionBase',
    'PowerOperation',
    'SubFunction',
    'adams',
    'aut_act',
    'aut_average',
    'constant_function',
    'delta_function',
    'external_product',
    'is_aut_invariant',
    'load_class_function',
    'power_mod_ideal',
    'power_mod_transfer',
    'power_op',
    'random_class_function',
    'restrict',
    'save_class_function',
    'transfer',
    'twist',
    'twisted_value',
    'unit_generators',
    'unit_group',
    'zero_function',
]

import itertools
import json
import logging
import random

from dataclasses import dataclass
from typing import (
    Any,
    Callable,
    Dict as DictType,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from .classify import (
    LevelDatum,
    SumDatum,
    classify,
    enumerate_sum_data,
    precompose,
)
from .coeffs import (
    CoeffValue,
    coeff_act,
)
from .exceptions import (
    CapExceededError,
    MissingEntryError,
    PrecisionError,
    SectionError,
)
from .groups import (
    DEFAULT_GROUP_CAP,
    CommutingTuple,
    FiniteGroup,
    GroupHom,
    ProductGroup,
    WreathProduct,
    direct_product,
    fixed_cosets,
    invert,
    make_group,
    multiply,
    perm_order,
    perm_power,
    wreath_product,
)
from .isogeny import (
    Isogeny,
    Section,
    kernel,
    psi_dual,
)
from .padic import (
    Context,
    FiniteSubgroup,
    enumerate_subgroups,
)
from .utils import (
    IntMatrix,
    determinant,
    valuation,
)


logger = logging.getLogger(__name__)

DEFAULT_AUT_CAP = 2 * 10 ** 5


class ClassFunctionBase:
    """
    Anything that evaluates on commuting tuples of ``group`` and is constant
    on classes.
    """

    ctx: Context
    group: FiniteGroup
    domain: Optional[FiniteSubgroup] = None

    def value(self, t: CommutingTuple) -> CoeffValue:
        raise NotImplementedError

    def __call__(self, t: CommutingTuple) -> CoeffValue:
        return self.value(t)

    @property
    def representatives(self) -> Tuple[CommutingTuple, ...]:
        return self.group.class_table(self.ctx.p, self.ctx.n).representatives

    def materialize(self) -> 'ClassFunction':
        return ClassFunction(
            self.ctx, self.group, {rep: self.value(rep) for rep in self.representatives}, domain=self.domain
        )


class ClassFunction(ClassFunctionBase):
    """
    A class function given by its values at the canonical class
    representatives. Looking up a class without an entry is an error.

    ``domain`` is ``None`` for functions on ``hom(Λ, G)`` and the subgroup
    ``H`` for functions on ``hom(Λ_H, G)``, tuples then being written on the
    canonical basis of ``Λ_H``.
    """

    def __init__(
        self,
        ctx: Context,
        group: FiniteGroup,
        entries: Mapping[CommutingTuple, CoeffValue],
        domain: Optional[FiniteSubgroup] = None
    ):
        self.ctx = ctx
        self.group = group
        self.domain = domain
        table = group.class_table(ctx.p, ctx.n)
        self._entries: DictType[CommutingTuple, CoeffValue] = {}
        for rep, value in entries.items():
            rep = tuple(tuple(g) for g in rep)
            if table.canonical_map.get(rep) != rep:
                raise ValueError('{} is not a canonical class representative of {}'.format(rep, group.name))
            self._entries[rep] = value if isinstance(value, CoeffValue) else CoeffValue.constant(value)

    def __repr__(self) -> str:
        return 'ClassFunction({}, {}, {} entries)'.format(self.group.name, self.ctx, len(self._entries))

    def __getitem__(self, rep: CommutingTuple) -> CoeffValue:
        try:
            return self._entries[tuple(rep)]
        except KeyError:
            raise MissingEntryError('No value at the class {} of {}'.format(rep, self.group.name))

    def value(self, t: CommutingTuple) -> CoeffValue:
        table = self.group.class_table(self.ctx.p, self.ctx.n)
        try:
            rep = table.canonical(t)
        except KeyError:
            raise ValueError('{} is not a commuting tuple of {}'.format(t, self.group.name))
        return self[rep]

    def items(self) -> List[Tuple[CommutingTuple, CoeffValue]]:
        return sorted(self._entries.items())

    def is_total(self) -> bool:
        return set(self._entries) == set(self.representatives)

    def materialize(self) -> 'ClassFunction':
        return self

    def _check_compatible(self, other: 'ClassFunction') -> None:
        if (self.ctx, self.group, self.domain) != (other.ctx, other.group, other.domain):
            raise ValueError('Class functions on different groups or domains')

    def _pointwise(self, other: Any, op: Callable[[CoeffValue, CoeffValue], CoeffValue]) -> 'ClassFunction':
        if isinstance(other, ClassFunctionBase):
            other = other.materialize()
            self._check_compatible(other)
            return ClassFunction(
                self.ctx, self.group, {rep: op(self[rep], other[rep]) for rep in self.representatives}, self.domain
            )
        other = other if isinstance(other, CoeffValue) else CoeffValue.constant(other)
        return ClassFunction(self.ctx, self.group, {rep: op(v, other) for rep, v in self._entries.items()}, self.domain)

    def __add__(self, other: Any) -> 'ClassFunction':
        return self._pointwise(other, lambda a, b: a + b)

    def __sub__(self, other: Any) -> 'ClassFunction':
        return self._pointwise(other, lambda a, b: a - b)

    def __mul__(self, other: Any) -> 'ClassFunction':
        return self._pointwise(other, lambda a, b: a * b)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> 'ClassFunction':
        return ClassFunction(self.ctx, self.group, {rep: -v for rep, v in self._entries.items()}, self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunctionBase):
            return NotImplemented
        other = other.materialize()
        return (
            (self.ctx, self.domain) == (other.ctx, other.domain)
            and self.group == other.group
            and self._entries == other._entries
        )

    __hash__ = None

    def to_dict(self) -> DictType[str, Any]:
        d: DictType[str, Any] = self.ctx.to_dict()
        d['group'] = self.group.name
        d['domain'] = self.domain.to_dict() if self.domain is not None else None
        d['entries'] = [
            {'class': [list(g) for g in rep], 'value': value.to_dict()} for rep, value in self.items()
        ]
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], cap: int = DEFAULT_GROUP_CAP) -> 'ClassFunction':
        ctx = Context(d['p'], d['n'], d['level'])
        group = make_group(d['group'], cap=cap)
        domain = FiniteSubgroup.from_dict(d['domain']) if d.get('domain') else None
        entries = {
            tuple(tuple(g) for g in entry['class']): CoeffValue.from_dict(entry['value'])
            for entry in d['entries']
        }
        return cls(ctx, group, entries, domain=domain)


def save_class_function(f: ClassFunctionBase, path: str) -> None:
    with open(path, 'w') as fh:
        fh.write(json.dumps(f.materialize().to_dict(), indent=2, sort_keys=True))
        fh.write('\n')


def load_class_function(path: str, cap: int = DEFAULT_GROUP_CAP) -> ClassFunction:
    with open(path) as fh:
        return ClassFunction.from_dict(json.load(fh), cap=cap)


def constant_function(ctx: Context, G: FiniteGroup, c: Union[CoeffValue, int] = 1) -> ClassFunction:
    c = c if isinstance(c, CoeffValue) else CoeffValue.constant(c)
    return ClassFunction(ctx, G, {rep: c for rep in G.class_table(ctx.p, ctx.n).representatives})


def zero_function(ctx: Context, G: FiniteGroup) -> ClassFunction:
    return constant_function(ctx, G, 0)


def delta_function(
    ctx: Context,
    G: FiniteGroup,
    t: CommutingTuple,
    v: Optional[Tuple[int, ...]] = None
) -> ClassFunction:
    """
    The function with value ``t_v`` at the class of ``t`` (``v = e_1`` by
    default) and zero elsewhere.
    """
    v = v if v is not None else tuple(int(i == 0) for i in range(ctx.n))
    table = G.class_table(ctx.p, ctx.n)
    target = table.canonical(t)
    value = CoeffValue.variable(v, ctx.modulus)
    return ClassFunction(
        ctx, G, {rep: value if rep == target else CoeffValue.zero() for rep in table.representatives}
    )


def random_class_function(ctx: Context, G: FiniteGroup, rng: random.Random, terms: int = 2) -> ClassFunction:
    """
    A class function whose values are small random integer combinations of
    a constant and ``terms`` random indeterminates.
    """
    q = ctx.modulus
    entries = {}
    for rep in G.class_table(ctx.p, ctx.n).representatives:
        value = CoeffValue.constant(rng.randint(-2, 2))
        for _ in range(terms):
            v = tuple(rng.randrange(q) for _ in range(ctx.n))
            value = value + rng.randint(1, 3) * CoeffValue.variable(v, q)
        entries[rep] = value
    return ClassFunction(ctx, G, entries)


class _Restriction(ClassFunctionBase):

    def __init__(self, f: ClassFunctionBase, j: GroupHom):
        self.ctx, self.group, self.domain = f.ctx, j.source, f.domain
        self.f, self.j = f, j

    def value(self, t: CommutingTuple) -> CoeffValue:
        return self.f.value(self.j.apply_tuple(t))


def restrict(f: ClassFunctionBase, j: GroupHom) -> ClassFunction:
    """
    ``(Res f)([α]) = f([j ∘ α])`` for a homomorphism ``j: K → G``.
    """
    if j.target != f.group:
        raise ValueError('Cannot restrict a function on {} along a map into {}'.format(f.group.name, j.target.name))
    return _Restriction(f, j).materialize()


def transfer(f: ClassFunctionBase, j: GroupHom) -> ClassFunction:
    """
    The transfer along an injective ``j: K → G``:
    ``Tr(f)([α]) = Σ f([g⁻¹ α g])`` over the cosets ``gK`` fixed by ``im α``.

    :param f: A class function on ``K``
    :type f: ClassFunctionBase

    :param j: The inclusion
    :type j: GroupHom

    :return: The transferred function on ``G``
    :rtype: ClassFunction
    """
    if j.source != f.group:
        raise ValueError('The function lives on {}, not on {}'.format(f.group.name, j.source.name))
    preimage = {j(k): k for k in j.source.elements}
    if len(preimage) != j.source.order:
        raise ValueError('Transfer needs an injective homomorphism')

    G = j.target
    entries = {}
    for rep in G.class_table(f.ctx.p, f.ctx.n).representatives:
        total = CoeffValue.zero()
        for g in fixed_cosets(G, j, rep):
            ginv = invert(g)
            conj = tuple(preimage[multiply(multiply(ginv, x), g)] for x in rep)
            total = total + f.value(conj)
        entries[rep] = total
    return ClassFunction(f.ctx, G, entries, domain=f.domain)


def twist(f: ClassFunctionBase, phi: Isogeny) -> ClassFunction:
    """
    ``f^{φ_H}([α]) = φ_H* f([α ψ_H*])`` on classes of ``hom(Λ_H, G)``,
    ``H = ker φ_H``; raises a precision error if ``H`` escapes the level.
    """
    if f.domain is not None:
        raise ValueError('Only functions on hom(Λ, G) can be twisted')
    psi = psi_dual(phi)
    H = kernel(phi)
    entries = {
        rep: coeff_act(phi, f.value(precompose(rep, psi.mat)))
        for rep in f.group.class_table(f.ctx.p, f.ctx.n).representatives
    }
    return ClassFunction(f.ctx, f.group, entries, domain=H if H.order_exp else None)


class _ExternalProduct(ClassFunctionBase):

    def __init__(self, fs: Tuple[ClassFunctionBase, ...], group: ProductGroup):
        self.ctx, self.group, self.fs = fs[0].ctx, group, fs

    def value(self, t: CommutingTuple) -> CoeffValue:
        pieces = [self.group.split(x) for x in t]
        result = CoeffValue.one()
        for k, f in enumerate(self.fs):
            result = result * f.value(tuple(piece[k] for piece in pieces))
        return result


def external_product(*fs: ClassFunctionBase, cap: int = DEFAULT_GROUP_CAP) -> ClassFunction:
    """
    ``(f × g)([α], [β]) = f([α]) g([β])`` on the direct product of the
    groups.
    """
    if not fs:
        raise ValueError('An external product needs at least one factor')
    if any(f.ctx != fs[0].ctx or f.domain is not None for f in fs):
        raise ValueError('External products need functions on hom(Λ, -) in one context')
    group = direct_product(*(f.group for f in fs), cap=cap)
    return _ExternalProduct(tuple(fs), group).materialize()


def twisted_value(f: ClassFunctionBase, phi: Isogeny, alpha: CommutingTuple) -> CoeffValue:
    """
    ``φ_H* f([α ψ_H*])`` for a tuple ``α`` on the basis of ``Λ_H``.
    """
    return coeff_act(phi, f.value(precompose(alpha, psi_dual(phi).mat)))


class PowerOperation(ClassFunctionBase):
    """
    The total power operation ``P^φ_m(f)`` on ``G ≀ Σ_m``, evaluated lazily:
    the value at a tuple with sum ``⊕_i (H_i, [α_i])`` is
    ``Π_i φ_{H_i}* f([α_i ψ_{H_i}*])``.
    """

    def __init__(self, f: ClassFunctionBase, m: int, section: Section, cap: int = DEFAULT_GROUP_CAP):
        if f.domain is not None:
            raise ValueError('The power operation acts on functions on hom(Λ, G)')
        if section.ctx != f.ctx:
            raise SectionError('The section belongs to a different context')
        self.ctx = f.ctx
        self.f = f
        self.m = m
        self.section = section
        self.group: WreathProduct = wreath_product(f.group, m, cap=cap)
        self._cache: DictType[SumDatum, CoeffValue] = {}

    def __repr__(self) -> str:
        return 'PowerOperation({}, m={})'.format(self.f.group.name, self.m)

    def part_value(self, part: LevelDatum) -> CoeffValue:
        return twisted_value(self.f, self.section[part.subgroup], part.alpha)

    def datum_value(self, datum: SumDatum) -> CoeffValue:
        if datum not in self._cache:
            result = CoeffValue.one()
            for part in datum.parts:
                result = result * self.part_value(part)
            self._cache[datum] = result
        return self._cache[datum]

    def value(self, t: CommutingTuple) -> CoeffValue:
        return self.datum_value(classify(self.ctx, self.f.group, t))


def power_op(f: ClassFunctionBase, m: int, section: Section, cap: int = DEFAULT_GROUP_CAP) -> PowerOperation:
    return PowerOperation(f, m, section, cap=cap)


@dataclass
class SubFunction:
    """
    The image of a power operation modulo the transfer ideal: values on the
    single-summand sums ``(H, [α])`` with ``|H| = m``.
    """
    ctx: Context
    group: FiniteGroup
    m: int
    entries: DictType[LevelDatum, CoeffValue]

    def _pointwise(self, other: 'SubFunction', op: Callable[[CoeffValue, CoeffValue], CoeffValue]) -> 'SubFunction':
        if (self.ctx, self.group, self.m) != (other.ctx, other.group, other.m):
            raise ValueError('Incompatible quotient functions')
        return SubFunction(self.ctx, self.group, self.m, {k: op(v, other.entries[k]) for k, v in self.entries.items()})

    def __add__(self, other: 'SubFunction') -> 'SubFunction':
        return self._pointwise(other, lambda a, b: a + b)

    def __mul__(self, other: 'SubFunction') -> 'SubFunction':
        return self._pointwise(other, lambda a, b: a * b)

    def __getitem__(self, part: LevelDatum) -> CoeffValue:
        try:
            return self.entries[part]
        except KeyError:
            raise MissingEntryError('No value at {}'.format(part))

    def to_dict(self) -> DictType[str, Any]:
        d: DictType[str, Any] = self.ctx.to_dict()
        d.update({
            'group': self.group.name,
            'm': self.m,
            'entries': [
                {'datum': part.to_dict(), 'value': value.to_dict()}
                for part, value in sorted(self.entries.items(), key=lambda kv: kv[0].sort_key)
            ],
        })
        return d


def power_mod_transfer(f: ClassFunctionBase, k: int, section: Section) -> SubFunction:
    """
    ``P^φ_{p^k}(f)`` modulo the transfer ideal.
    """
    ctx = f.ctx
    entries = {
        datum.parts[0]: twisted_value(f, section[datum.parts[0].subgroup], datum.parts[0].alpha)
        for datum in enumerate_sum_data(ctx, f.group, ctx.p ** k)
        if datum.is_single
    }
    return SubFunction(ctx, f.group, ctx.p ** k, entries)


def power_mod_ideal(
    f: ClassFunctionBase,
    k: int,
    section: Section,
    subgroups: Optional[List[FiniteSubgroup]] = None
) -> DictType[FiniteSubgroup, ClassFunction]:
    """
    The components of ``P^φ_{p^k}`` modulo ``I``: for every ``H`` of order
    ``p^k`` (or only the given ones), ``(P/I)(f)[H]([α]) = φ_H* f([α φ_H*])``.
    """
    ctx = f.ctx
    out = {}
    for H in (subgroups if subgroups is not None else enumerate_subgroups(ctx, k)):
        if H.order_exp != k:
            raise ValueError('{} does not have order {}^{}'.format(H, ctx.p, k))
        phi = section[H]
        out[H] = ClassFunction(ctx, f.group, {
            rep: coeff_act(phi, f.value(precompose(rep, phi.dual)))
            for rep in f.representatives
        })
    return out


def adams(f: ClassFunctionBase, k: int) -> ClassFunction:
    """
    The Adams operation ``ψ^{p^k}(f)([α]) = (p^k)* f([p^k α])``.
    """
    ctx = f.ctx
    scalar = Isogeny.scalar(ctx, ctx.p ** k)
    return ClassFunction(ctx, f.group, {
        rep: coeff_act(scalar, f.value(tuple(perm_power(x, ctx.p ** k) for x in rep)))
        for rep in f.representatives
    }, domain=f.domain)


def aut_act(sigma: Union[Isogeny, IntMatrix], f: ClassFunctionBase) -> ClassFunction:
    """
    The right action of an automorphism, ``f^σ([α]) = σ* f([α σ*])``.
    """
    sigma = sigma if isinstance(sigma, Isogeny) else Isogeny(f.ctx, sigma)
    if not sigma.is_automorphism:
        raise ValueError('{} is not invertible mod {}'.format(sigma.mat, f.ctx.p))
    return twist(f, sigma)


def unit_group(ctx: Context, cap: int = DEFAULT_AUT_CAP) -> Iterator[IntMatrix]:
    """
    All matrices over ``Z/p^N`` invertible mod ``p``, with entries in
    ``[0, p^N)``.
    """
    q, n = ctx.modulus, ctx.n
    if q ** (n * n) > cap:
        raise CapExceededError(
            'Enumerating GL_{}(Z/{}) needs {} candidates, above the cap of {}'.format(n, q, q ** (n * n), cap)
        )
    for entries in itertools.product(range(q), repeat=n * n):
        mat = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if determinant(mat) % ctx.p:
            yield mat


def unit_generators(ctx: Context) -> List[IntMatrix]:
    """
    Generators of ``GL_n(Z/p^N)``: the elementary matrices ``E_ij(1)`` and
    ``diag(u, 1, ..., 1)`` for every unit ``u``.
    """
    n, q = ctx.n, ctx.modulus
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        gens.append(tuple(tuple(int(a == b) + int((a, b) == (i, j)) for b in range(n)) for a in range(n)))
    for u in range(2, q):
        if u % ctx.p:
            gens.append(tuple(tuple((u if a == 0 else 1) if a == b else 0 for b in range(n)) for a in range(n)))
    return gens


def _check_action_level(f: ClassFunctionBase) -> None:
    p = f.ctx.p
    e = max((valuation(perm_order(g), p) or 0) for g in f.group.p_elements(p))
    if e > f.ctx.level:
        raise PrecisionError(
            'Elements of order {}^{} in {} need level {} for the Aut-action, got {}'.format(
                p, e, f.group.name, e, f.ctx.level
            )
        )


def aut_average(f: ClassFunctionBase, cap: int = DEFAULT_AUT_CAP) -> ClassFunction:
    """
    The mean of ``f^σ`` over all ``σ`` in ``GL_n(Z/p^N)``.
    """
    _check_action_level(f)
    total: Optional[ClassFunction] = None
    count = 0
    for sigma in unit_group(f.ctx, cap):
        term = aut_act(sigma, f)
        total = term if total is None else total + term
        count += 1
    return ClassFunction(f.ctx, f.group, {rep: v / count for rep, v in total.items()}, domain=f.domain)


def is_aut_invariant(f: ClassFunctionBase) -> bool:
    _check_action_level(f)
    f = f.materialize()
    return all(aut_act(sigma, f) == f for sigma in unit_generators(f.ctx))
