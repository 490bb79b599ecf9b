"""
Exact arithmetic on the torsion of ``Λ* = (Q_p/Z_p)^n`` at a fixed working
level ``N``.

A torsion point of ``Λ*[p^N]`` is stored as an integer vector ``x`` with
entries in ``[0, p^N)``, encoding ``x / p^N``. A finite subgroup ``H`` is
stored as the lattice ``L`` with ``p^N Z^n ⊆ L ⊆ Z^n`` and ``H = L / p^N Z^n``,
in lower-triangular column Hermite normal form, so that subgroup equality is
matrix equality. The dual lattice ``Λ_H`` (the annihilator of ``H`` in
``Λ = Z_p^n``) is represented by its own HNF basis inside ``Z^n``.

Isogenies act on torsion points by ``v ↦ A v`` (column vectors); the dual
action on ``Λ`` is by the transpose.
"""
__all__ = [
    'Context',
    'FiniteSubgroup',
    'LatticeBasis',
    'TorsionVector',
    'annihilator_basis',
    'canonicalize',
    'elem_order',
    'enumerate_subgroups',
    'full_torsion',
    'subgroup_from_annihilator',
    'subgroup_image',
    'subgroup_preimage',
    'trivial_subgroup',
]

import itertools
import logging

from dataclasses import (
    dataclass,
    field,
)
from fractions import Fraction
from functools import lru_cache
from typing import (
    Any,
    Dict as DictType,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import sympy

from .exceptions import PrecisionError
from .utils import (
    IntMatrix,
    adjugate,
    determinant,
    hermite_normal_form,
    mat_mul,
    mat_vec,
    matrix,
    modular_kernel,
    solve_lower,
    is_prime,
    valuation,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Context:
    """
    The prime ``p``, the rank ``n`` and the working level ``N`` (here
    ``level``); all torsion data lives in ``Λ*[p^level]``.
    """
    p: int
    n: int
    level: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError('{} is not a prime'.format(self.p))
        if self.n < 1:
            raise ValueError('The rank must be at least 1, got {}'.format(self.n))
        if self.level < 1:
            raise ValueError('The level must be at least 1, got {}'.format(self.level))

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    def vector(self, coords: Sequence[int]) -> 'TorsionVector':
        return TorsionVector(self, tuple(coords))

    def point(self, *fractions: Union[Fraction, int, str]) -> 'TorsionVector':
        """
        Returns the torsion point with the given rational coordinates, e.g.
        ``ctx.point('1/2', 0)``; raises a precision error if a coordinate has
        a denominator beyond ``p^N``.
        """
        if len(fractions) != self.n:
            raise ValueError('Expected {} coordinates, got {}'.format(self.n, len(fractions)))
        coords = []
        for x in fractions:
            scaled = Fraction(x) * self.modulus
            if scaled.denominator != 1:
                raise PrecisionError(
                    'The coordinate {} does not lie in Λ*[{}^{}]'.format(x, self.p, self.level)
                )
            coords.append(int(scaled))
        return TorsionVector(self, tuple(coords))

    def points(self, j: Optional[int] = None) -> Iterator['TorsionVector']:
        """
        Iterates over all points of ``Λ*[p^j]`` (default ``j = N``).
        """
        j = self.level if j is None else j
        step = self.p ** (self.level - j)
        for coords in itertools.product(range(0, self.modulus, step), repeat=self.n):
            yield TorsionVector(self, coords)

    def to_dict(self) -> DictType[str, int]:
        return {'p': self.p, 'n': self.n, 'level': self.level}


@dataclass(frozen=True)
class TorsionVector:
    ctx: Context
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.ctx.n:
            raise ValueError(
                'A torsion vector of rank {} needs {} coordinates'.format(self.ctx.n, self.ctx.n)
            )
        object.__setattr__(self, 'coords', tuple(int(x) % self.ctx.modulus for x in self.coords))

    def __add__(self, other: 'TorsionVector') -> 'TorsionVector':
        return TorsionVector(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> 'TorsionVector':
        return TorsionVector(self.ctx, tuple(-a for a in self.coords))

    def scale(self, c: int) -> 'TorsionVector':
        return TorsionVector(self.ctx, tuple(c * a for a in self.coords))

    def fractions(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(a, self.ctx.modulus) for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_dict(self) -> DictType[str, Any]:
        return {'coords': list(self.coords)}

    def __repr__(self) -> str:
        return '({})'.format(','.join(str(x) for x in self.fractions()))


def elem_order(v: TorsionVector) -> int:
    """
    The order of a torsion point: the least ``p^j`` with ``p^j v = 0``.
    """
    ctx = v.ctx
    vals = [valuation(a, ctx.p) for a in v.coords if a]
    if not vals:
        return 1
    return ctx.p ** (ctx.level - min(vals))


@dataclass(frozen=True)
class LatticeBasis:
    """
    A finite-index sublattice of ``Z^n`` given by its HNF basis (columns).
    """
    mat: IntMatrix

    @classmethod
    def from_generators(
        cls,
        generators: Iterable[Sequence[int]],
        n: int,
        modulus: Optional[int] = None
    ) -> 'LatticeBasis':
        return cls(hermite_normal_form(generators, n, modulus=modulus))

    @property
    def rank(self) -> int:
        return len(self.mat)

    @property
    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(row[j] for row in self.mat) for j in range(self.rank)]

    @property
    def det(self) -> int:
        d = 1
        for i, row in enumerate(self.mat):
            d *= row[i]
        return d

    def coordinates(self, x: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """
        The coordinates of ``x`` in this basis, or ``None`` if ``x`` is not in
        the lattice.
        """
        return solve_lower(self.mat, x)

    def contains(self, x: Sequence[int]) -> bool:
        return self.coordinates(x) is not None

    def reduce(self, x: Sequence[int]) -> Tuple[int, ...]:
        """
        The canonical representative of ``x`` modulo the lattice, with
        ``0 <= r_i < B[i][i]``.
        """
        r = list(x)
        for i, col in enumerate(self.columns):
            q = r[i] // col[i]
            if q:
                r = [a - q * b for a, b in zip(r, col)]
        return tuple(r)

    def coset_representatives(self) -> List[Tuple[int, ...]]:
        """
        The canonical representatives of ``Z^n / L`` in lexicographic order.
        """
        return list(itertools.product(*(range(row[i]) for i, row in enumerate(self.mat))))

    def change_of_basis(self, other: 'LatticeBasis') -> IntMatrix:
        """
        The integer matrix ``C`` with ``self.mat @ C = other.mat``; requires
        ``other`` to be a sublattice of ``self``.
        """
        cols = []
        for col in other.columns:
            c = self.coordinates(col)
            if c is None:
                raise ValueError('{} is not a sublattice of {}'.format(other.mat, self.mat))
            cols.append(c)
        return tuple(zip(*cols))

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.mat]


@dataclass(frozen=True)
class FiniteSubgroup:
    """
    A finite subgroup of ``Λ*[p^N]``, as an HNF lattice between ``p^N Z^n``
    and ``Z^n``. Equality is equality of contexts and bases.
    """
    ctx: Context
    basis: IntMatrix
    order_exp: int = field(init=False, compare=False)

    def __post_init__(self):
        ctx = self.ctx
        d = 1
        for i, row in enumerate(self.basis):
            d *= row[i]
        object.__setattr__(self, 'order_exp', ctx.n * ctx.level - valuation(d, ctx.p))

    @property
    def order(self) -> int:
        return self.ctx.p ** self.order_exp

    @property
    def lattice(self) -> LatticeBasis:
        return LatticeBasis(self.basis)

    @property
    def sort_key(self) -> Tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.basis))

    def __lt__(self, other: 'FiniteSubgroup') -> bool:
        return (self.order_exp, self.sort_key) < (other.order_exp, other.sort_key)

    def generators(self) -> List[TorsionVector]:
        return [TorsionVector(self.ctx, col) for col in self.lattice.columns if any(
            a % self.ctx.modulus for a in col
        )]

    def contains(self, v: TorsionVector) -> bool:
        return self.lattice.contains(v.coords)

    def is_subgroup_of(self, other: 'FiniteSubgroup') -> bool:
        return all(other.lattice.contains(col) for col in self.lattice.columns)

    def elements(self) -> List[TorsionVector]:
        ctx = self.ctx
        cols = self.lattice.columns
        ranges = [range(ctx.modulus // col[i]) for i, col in enumerate(cols)]
        return [
            TorsionVector(ctx, tuple(sum(c * col[i] for c, col in zip(cs, cols)) for i in range(ctx.n)))
            for cs in itertools.product(*ranges)
        ]

    def exponent(self) -> int:
        return max(elem_order(v) for v in self.generators()) if self.order_exp else 1

    def to_dict(self) -> DictType[str, Any]:
        d = self.ctx.to_dict()
        d.update({'order_exp': self.order_exp, 'basis': [list(row) for row in self.basis]})
        return d

    @classmethod
    def from_dict(cls, d: DictType[str, Any]) -> 'FiniteSubgroup':
        ctx = Context(d['p'], d['n'], d['level'])
        basis = matrix(d['basis'])
        if hermite_normal_form(basis_columns(basis), ctx.n) != basis:
            raise ValueError('The basis {} is not in Hermite normal form'.format(d['basis']))
        H = cls(ctx, basis)
        if not _contains_full_level(H):
            raise ValueError('The lattice {} does not contain p^N Z^n'.format(d['basis']))
        if 'order_exp' in d and d['order_exp'] != H.order_exp:
            raise ValueError('Declared order p^{} does not match the basis'.format(d['order_exp']))
        return H

    def __repr__(self) -> str:
        gens = ', '.join(repr(v) for v in self.generators())
        return '<{}>'.format(gens) if gens else '<0>'


def basis_columns(basis: IntMatrix) -> List[Tuple[int, ...]]:
    return [tuple(row[j] for row in basis) for j in range(len(basis))]


def _full_level_generators(ctx: Context) -> List[Tuple[int, ...]]:
    q = ctx.modulus
    return [tuple(q if i == j else 0 for i in range(ctx.n)) for j in range(ctx.n)]


def _contains_full_level(H: FiniteSubgroup) -> bool:
    return all(H.lattice.contains(g) for g in _full_level_generators(H.ctx))


def _from_generators(ctx: Context, generators: Iterable[Sequence[int]]) -> FiniteSubgroup:
    gens = list(generators) + _full_level_generators(ctx)
    return FiniteSubgroup(ctx, hermite_normal_form(gens, ctx.n, modulus=ctx.modulus))


def canonicalize(ctx: Context, gens: Iterable[Union[TorsionVector, Sequence[int]]]) -> FiniteSubgroup:
    """
    Returns the subgroup of ``Λ*[p^N]`` generated by the given points, in
    canonical form.

    :param ctx: The context
    :type ctx: Context

    :param gens: Torsion vectors, or raw integer coordinate vectors
    :type gens: Iterable

    :return: The generated subgroup
    :rtype: FiniteSubgroup
    """
    coords = []
    for g in gens:
        if isinstance(g, TorsionVector):
            if g.ctx != ctx:
                raise ValueError('Generator {} belongs to a different context'.format(g))
            coords.append(g.coords)
        else:
            if len(g) != ctx.n:
                raise ValueError('Generator {} does not have rank {}'.format(g, ctx.n))
            coords.append(tuple(int(a) for a in g))
    return _from_generators(ctx, coords)


def trivial_subgroup(ctx: Context) -> FiniteSubgroup:
    return _from_generators(ctx, [])


def full_torsion(ctx: Context, j: int) -> FiniteSubgroup:
    """
    The subgroup ``Λ*[p^j]``.
    """
    if j > ctx.level:
        raise PrecisionError('Λ*[{}^{}] does not fit in level {}'.format(ctx.p, j, ctx.level))
    step = ctx.p ** (ctx.level - j)
    return _from_generators(
        ctx, [tuple(step if i == k else 0 for i in range(ctx.n)) for k in range(ctx.n)]
    )


@lru_cache(maxsize=None)
def enumerate_subgroups(ctx: Context, k: int) -> Tuple[FiniteSubgroup, ...]:
    """
    All subgroups of ``Λ*[p^N]`` of order ``p^k``, in canonical form and in
    lexicographic order of their bases.

    The HNF bases are enumerated directly: diagonal entries ``p^{a_i}`` with
    ``sum(a_i) = nN - k``, reduced entries below the diagonal, filtered by the
    requirement ``p^N Z^n ⊆ L``.
    """
    p, n, N = ctx.p, ctx.n, ctx.level
    target = n * N - k
    if target < 0 or k < 0:
        return ()

    found = []
    full = _full_level_generators(ctx)
    for exps in itertools.product(range(N + 1), repeat=n):
        if sum(exps) != target:
            continue
        diag = [p ** a for a in exps]
        slots = [(i, j) for i in range(n) for j in range(i)]
        for values in itertools.product(*(range(diag[i]) for i, _ in slots)):
            b = [[0] * n for _ in range(n)]
            for i in range(n):
                b[i][i] = diag[i]
            for (i, j), x in zip(slots, values):
                b[i][j] = x
            basis = matrix(b)
            if all(solve_lower(basis, g) is not None for g in full):
                found.append(FiniteSubgroup(ctx, basis))

    found.sort(key=lambda H: H.sort_key)
    logger.debug('Enumerated %d subgroups of order %d^%d at %s', len(found), p, k, ctx)
    return tuple(found)


def _dual_generators(mat: IntMatrix, scale: int) -> Optional[List[Tuple[int, ...]]]:
    # columns of scale * (mat^T)^{-1}, or None if not integral
    inv = sympy.Matrix(mat).T.inv() * scale
    if not all(x.is_integer for x in inv):
        return None
    rows = matrix(inv.tolist())
    return basis_columns(rows)


def annihilator_basis(H: FiniteSubgroup) -> LatticeBasis:
    """
    The HNF basis of ``Λ_H = {l : <l, h> ∈ Z for all h in H}``; its
    determinant is ``|H|``.
    """
    return _annihilator_basis(H)


@lru_cache(maxsize=None)
def _annihilator_basis(H: FiniteSubgroup) -> LatticeBasis:
    gens = _dual_generators(H.basis, H.ctx.modulus)
    return LatticeBasis.from_generators(gens, H.ctx.n, modulus=H.ctx.modulus)


def subgroup_from_annihilator(ctx: Context, lattice: LatticeBasis) -> FiniteSubgroup:
    """
    The subgroup ``H`` of ``Λ*`` with annihilator ``lattice``; raises a
    precision error if ``H`` does not fit in ``Λ*[p^N]``.
    """
    gens = _dual_generators(lattice.mat, ctx.modulus)
    if gens is None:
        raise PrecisionError(
            'The dual of the lattice {} does not fit in level {}'.format(lattice.mat, ctx.level)
        )
    return _from_generators(ctx, gens)


def _matrix_of(a: Any) -> IntMatrix:
    return a.mat if hasattr(a, 'mat') else matrix(a)


def subgroup_image(a: Any, H: FiniteSubgroup) -> FiniteSubgroup:
    """
    The subgroup ``A(H)``, for an isogeny or integer matrix ``A``.
    """
    mat = _matrix_of(a)
    return _from_generators(H.ctx, (mat_vec(mat, col) for col in H.lattice.columns))


def subgroup_preimage(a: Any, K: FiniteSubgroup) -> FiniteSubgroup:
    """
    The subgroup ``{v ∈ Λ* : A v ∈ K}``, for an isogeny or integer matrix
    ``A`` with nonzero determinant.

    Membership ``A x ∈ L_K`` is the congruence ``adj(B_K) A x = 0`` modulo
    ``det B_K``. The true preimage in ``Λ*`` has order ``|K| p^{v_p(det A)}``;
    if the solution inside ``Λ*[p^N]`` is smaller, the preimage escapes the
    working level and a precision error is raised.
    """
    ctx = K.ctx
    mat = _matrix_of(a)
    det = determinant(mat)
    if det == 0:
        raise ValueError('The matrix {} is singular'.format(mat))
    expected = K.order_exp + valuation(det, ctx.p)

    e = valuation(K.lattice.det, ctx.p)
    rows = mat_mul(adjugate(K.basis), mat)
    gens = modular_kernel(rows, ctx.n, ctx.p, e)
    T = _from_generators(ctx, gens)
    if T.order_exp != expected:
        raise PrecisionError(
            'The preimage of {} under {} has order {}^{} and escapes level {}'.format(
                K, mat, ctx.p, expected, ctx.level
            )
        )
    return T
