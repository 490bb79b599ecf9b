"""
Endo-isogenies of ``Λ*`` as exact integer matrices, their kernels and the
dual factorization ``φ_H* = q_H* ∘ ψ_H*``, and sections of the kernel map.

A section assigns to each subgroup ``H ⊆ Λ*[p^level]`` an isogeny with kernel
``H``. It is a power section when ``φ_T = φ_{φ_H(T)} φ_H`` for all ``H ⊆ T``.
For ``n = 1`` multiplication by ``p^k`` gives one; for ``n = 2`` the order-``p``
values are fixed matrices squaring to ``p`` and larger subgroups are reached
along composition series.
"""
__all__ = [
    'Isogeny',
    'PowerSectionWitness',
    'PsiDual',
    'Section',
    'act_on_section',
    'build_power_section',
    'compose',
    'composition_series_matrices',
    'default_mutation',
    'is_power_section',
    'kernel',
    'load_section',
    'mutate_section',
    'order_p_matrix',
    'psi_dual',
    'save_section',
    'subgroup_lattice',
    'subgroups_up_to',
]

import json
import logging

from dataclasses import (
    dataclass,
    field,
)
from functools import lru_cache
from typing import (
    Any,
    Dict as DictType,
    FrozenSet,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from .exceptions import (
    PrecisionError,
    SectionError,
    TPOError,
    UnsupportedRankError,
)
from .padic import (
    Context,
    FiniteSubgroup,
    LatticeBasis,
    TorsionVector,
    annihilator_basis,
    canonicalize,
    enumerate_subgroups,
    full_torsion,
    subgroup_image,
    subgroup_preimage,
    trivial_subgroup,
)
from .utils import (
    IntMatrix,
    determinant,
    identity_matrix,
    mat_mul,
    mat_vec,
    matrix,
    scalar_matrix,
    transpose,
    valuation,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Isogeny:
    """
    An isogeny of ``Λ*`` given by an exact integer matrix acting on column
    vectors. ``det_val`` is the ``p``-adic valuation of the determinant, so
    the kernel has order ``p^det_val``.
    """
    ctx: Context
    mat: IntMatrix
    det_val: int = field(init=False, compare=False)

    def __post_init__(self):
        mat = matrix(self.mat)
        n = self.ctx.n
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ValueError('An isogeny of rank {} needs an {}x{} matrix'.format(n, n, n))
        det = determinant(mat)
        if det == 0:
            raise ValueError('The matrix {} is singular and is not an isogeny'.format(mat))
        object.__setattr__(self, 'mat', mat)
        object.__setattr__(self, 'det_val', valuation(det, self.ctx.p))

    @classmethod
    def identity(cls, ctx: Context) -> 'Isogeny':
        return cls(ctx, identity_matrix(ctx.n))

    @classmethod
    def scalar(cls, ctx: Context, c: int) -> 'Isogeny':
        return cls(ctx, scalar_matrix(ctx.n, c))

    @property
    def is_automorphism(self) -> bool:
        return self.det_val == 0

    @property
    def dual(self) -> IntMatrix:
        """
        The matrix of the dual map on ``Λ``, i.e. the transpose.
        """
        return transpose(self.mat)

    def __call__(self, v: TorsionVector) -> TorsionVector:
        return TorsionVector(self.ctx, mat_vec(self.mat, v.coords))

    def __matmul__(self, other: 'Isogeny') -> 'Isogeny':
        return compose(self, other)

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.mat]


def compose(a: Isogeny, b: Isogeny) -> Isogeny:
    """
    The composite ``a ∘ b``, i.e. the matrix product ``a.mat @ b.mat``.
    """
    if a.ctx != b.ctx:
        raise ValueError('Cannot compose isogenies from different contexts')
    return Isogeny(a.ctx, mat_mul(a.mat, b.mat))


@lru_cache(maxsize=None)
def kernel(a: Isogeny) -> FiniteSubgroup:
    """
    The kernel of ``a`` on ``Λ*``; raises a precision error if it is not
    contained in ``Λ*[p^N]``.
    """
    try:
        return subgroup_preimage(a, trivial_subgroup(a.ctx))
    except PrecisionError:
        raise PrecisionError(
            'The kernel of {} has order {}^{} and escapes level {}'.format(
                a.mat, a.ctx.p, a.det_val, a.ctx.level
            )
        )


@dataclass(frozen=True)
class PsiDual:
    """
    The matrix of ``ψ_H*: Λ → Λ_H`` in the canonical basis of ``Λ_H``, so that
    ``basis.mat @ mat = Aᵀ``.
    """
    mat: IntMatrix
    basis: LatticeBasis


@lru_cache(maxsize=None)
def psi_dual(a: Isogeny) -> PsiDual:
    basis = annihilator_basis(kernel(a))
    cols = []
    # columns of A^T are the rows of A
    for col in a.mat:
        c = basis.coordinates(col)
        if c is None:
            raise TPOError(
                'The dual of {} does not factor through the annihilator {}'.format(a.mat, basis.mat)
            )
        cols.append(c)
    return PsiDual(tuple(zip(*cols)), basis)


def subgroups_up_to(ctx: Context, level: int) -> List[FiniteSubgroup]:
    """
    All subgroups of ``Λ*[p^level]``, ordered by order and then by basis.
    """
    top = full_torsion(ctx, level)
    return [
        H
        for k in range(ctx.n * level + 1)
        for H in enumerate_subgroups(ctx, k)
        if H.is_subgroup_of(top)
    ]


def subgroup_lattice(ctx: Context, level: int) -> nx.DiGraph:
    """
    The lattice of subgroups of ``Λ*[p^level]`` as a directed graph with an
    edge ``K -> H`` whenever ``K`` is an index-``p`` subgroup of ``H``.
    """
    subgroups = subgroups_up_to(ctx, level)
    by_order: DictType[int, List[FiniteSubgroup]] = {}
    for H in subgroups:
        by_order.setdefault(H.order_exp, []).append(H)

    G = nx.DiGraph()
    G.add_nodes_from(subgroups)
    for k, layer in by_order.items():
        for H in by_order.get(k + 1, []):
            G.add_edges_from((K, H) for K in layer if K.is_subgroup_of(H))
    return G


class Section:
    """
    A table ``H ↦ φ_H`` over every subgroup of ``Λ*[p^level]``, with
    ``ker φ_H = H`` checked on construction.
    """

    def __init__(self, ctx: Context, level: int, table: Mapping[FiniteSubgroup, Isogeny]):
        if level > ctx.level:
            raise PrecisionError('Section level {} exceeds the context level {}'.format(level, ctx.level))
        self.ctx = ctx
        self.level = level
        self._table: DictType[FiniteSubgroup, Isogeny] = dict(table)

        expected = set(subgroups_up_to(ctx, level))
        if set(self._table) != expected:
            raise SectionError(
                'A section of level {} must cover exactly the {} subgroups of Λ*[{}^{}], '
                'got {} entries'.format(level, len(expected), ctx.p, level, len(self._table))
            )
        for H, phi in self._table.items():
            if phi.ctx != ctx:
                raise SectionError('The value at {} belongs to a different context'.format(H))
            if kernel(phi) != H:
                raise SectionError(
                    'The value {} at {} has kernel {}'.format(phi.mat, H, kernel(phi))
                )

    def __getitem__(self, H: FiniteSubgroup) -> Isogeny:
        try:
            return self._table[H]
        except KeyError:
            raise SectionError('The section has no value at {}'.format(H))

    def __contains__(self, H: FiniteSubgroup) -> bool:
        return H in self._table

    def __iter__(self) -> Iterator[FiniteSubgroup]:
        return iter(sorted(self._table))

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return (self.ctx, self.level, self._table) == (other.ctx, other.level, other._table)

    def items(self) -> List[Tuple[FiniteSubgroup, Isogeny]]:
        return [(H, self._table[H]) for H in self]

    def replace(self, updates: Mapping[FiniteSubgroup, Isogeny]) -> 'Section':
        table = dict(self._table)
        table.update(updates)
        return Section(self.ctx, self.level, table)

    def to_dict(self) -> DictType[str, Any]:
        d = self.ctx.to_dict()
        d['section_level'] = self.level
        d['entries'] = [
            {'subgroup': H.to_dict(), 'matrix': phi.to_list()} for H, phi in self.items()
        ]
        return d

    @classmethod
    def from_dict(cls, d: DictType[str, Any]) -> 'Section':
        ctx = Context(d['p'], d['n'], d['level'])
        table = {}
        for entry in d['entries']:
            H = FiniteSubgroup.from_dict(entry['subgroup'])
            if H.ctx != ctx:
                raise SectionError('Entry {} does not match the section context'.format(entry['subgroup']))
            table[H] = Isogeny(ctx, matrix(entry['matrix']))
        return cls(ctx, d['section_level'], table)


def save_section(s: Section, path: str) -> None:
    with open(path, 'w') as f:
        f.write(json.dumps(s.to_dict(), indent=2, sort_keys=True))
        f.write('\n')


def load_section(path: str) -> Section:
    with open(path) as f:
        return Section.from_dict(json.load(f))


def order_p_matrix(H: FiniteSubgroup) -> IntMatrix:
    """
    The height-2 value at an order-``p`` subgroup: ``[[-i, 1], [p - i², i]]``
    at ``<(1/p, i/p)>`` and ``[[0, p], [1, 0]]`` at ``<(0, 1/p)>``. Each squares
    to ``p`` times the identity and maps ``Λ*[p]`` onto ``H``.
    """
    ctx = H.ctx
    if ctx.n != 2 or H.order_exp != 1:
        raise ValueError('{} is not an order-p subgroup of rank 2'.format(H))
    p, unit = ctx.p, ctx.p ** (ctx.level - 1)
    for i in range(p):
        if canonicalize(ctx, [(unit, i * unit)]) == H:
            return ((-i, 1), (p - i * i, i))
    return ((0, p), (1, 0))


def build_power_section(ctx: Context, level: int) -> Section:
    """
    Builds the power section of ``Λ*[p^level]`` for ranks 1 and 2.

    In rank 2 the value at a larger subgroup ``H`` is ``φ_{φ_K(H)} φ_K`` where
    ``K`` is the lexicographically least order-``p`` subgroup of ``H``.

    :param ctx: The context
    :type ctx: Context

    :param level: The torsion level covered, at most ``ctx.level``
    :type level: int

    :return: The section
    :rtype: Section
    """
    if ctx.n >= 3:
        raise UnsupportedRankError(
            'No power section construction is known in rank {}'.format(ctx.n)
        )
    if level > ctx.level:
        raise PrecisionError('Section level {} exceeds the context level {}'.format(level, ctx.level))

    subgroups = subgroups_up_to(ctx, level)
    if ctx.n == 1:
        table = {H: Isogeny.scalar(ctx, ctx.p ** H.order_exp) for H in subgroups}
        return Section(ctx, level, table)

    order_p = [H for H in subgroups if H.order_exp == 1]
    table: DictType[FiniteSubgroup, Isogeny] = {}

    def value(H: FiniteSubgroup) -> Isogeny:
        if H in table:
            return table[H]
        if H.order_exp == 0:
            phi = Isogeny.identity(ctx)
        elif H.order_exp == 1:
            phi = Isogeny(ctx, order_p_matrix(H))
        else:
            K = next(K for K in order_p if K.is_subgroup_of(H))
            phi_K = value(K)
            phi = compose(value(subgroup_image(phi_K, H)), phi_K)
        table[H] = phi
        return phi

    for H in subgroups:
        value(H)
    logger.debug('Built a power section with %d entries at %s, level %d', len(table), ctx, level)
    return Section(ctx, level, table)


@dataclass(frozen=True)
class PowerSectionWitness:
    """
    A nested pair ``H ⊆ T`` with ``φ_T != φ_{T/H} φ_H``.
    """
    H: FiniteSubgroup
    T: FiniteSubgroup
    quotient: FiniteSubgroup
    expected: IntMatrix
    actual: IntMatrix

    def to_dict(self) -> DictType[str, Any]:
        return {
            'H': self.H.to_dict(),
            'T': self.T.to_dict(),
            'quotient': self.quotient.to_dict(),
            'phi_T': [list(r) for r in self.expected],
            'phi_quotient_phi_H': [list(r) for r in self.actual],
        }


def is_power_section(s: Section) -> Optional[PowerSectionWitness]:
    """
    Returns ``None`` if ``s`` is a power section over its level, otherwise the
    first failing nested pair.
    """
    lattice = subgroup_lattice(s.ctx, s.level)
    for T in s:
        for H in sorted(nx.ancestors(lattice, T) | {T}):
            Q = subgroup_image(s[H], T)
            if Q not in s:
                raise PrecisionError('The image {} of {} escapes the section table'.format(Q, T))
            composite = mat_mul(s[Q].mat, s[H].mat)
            if composite != s[T].mat:
                return PowerSectionWitness(H, T, Q, s[T].mat, composite)
    return None


def composition_series_matrices(s: Section, H: FiniteSubgroup) -> Set[IntMatrix]:
    """
    All products ``φ_{K_r} ··· φ_{K_1}`` along chains of order-``p`` steps
    ``K_1 ⊆ H``, ``K_2 ⊆ φ_{K_1}(H)``, ..., ending at the trivial subgroup.
    """
    order_p = [K for K in s if K.order_exp == 1]
    memo: DictType[FiniteSubgroup, FrozenSet[IntMatrix]] = {}

    def products(T: FiniteSubgroup) -> FrozenSet[IntMatrix]:
        if T not in memo:
            if T.order_exp == 0:
                memo[T] = frozenset([identity_matrix(s.ctx.n)])
            else:
                out = set()
                for K in order_p:
                    if K.is_subgroup_of(T):
                        for M in products(subgroup_image(s[K], T)):
                            out.add(mat_mul(M, s[K].mat))
                memo[T] = frozenset(out)
        return memo[T]

    return set(products(H))


def mutate_section(s: Section, H: FiniteSubgroup, u: Union[Isogeny, IntMatrix]) -> Section:
    """
    Replaces ``s[H]`` by ``u·s[H]`` for an automorphism ``u``; the result is
    again a section but in general not a power section.
    """
    u = u if isinstance(u, Isogeny) else Isogeny(s.ctx, u)
    if not u.is_automorphism:
        raise ValueError('{} is not invertible mod p'.format(u.mat))
    return s.replace({H: compose(u, s[H])})


def act_on_section(gamma: Union[Isogeny, IntMatrix], s: Section) -> Section:
    """
    The left action of ``Aut(Λ*)`` on sections, ``(γφ)_H = γ φ_H``.
    """
    gamma = gamma if isinstance(gamma, Isogeny) else Isogeny(s.ctx, gamma)
    if not gamma.is_automorphism:
        raise ValueError('{} is not invertible mod p'.format(gamma.mat))
    return Section(s.ctx, s.level, {H: compose(gamma, phi) for H, phi in s.items()})


def default_mutation(s: Section) -> Section:
    """
    The shipped non-power section: in rank 2 the value at the least order-``p``
    subgroup is replaced by ``[[1, 1], [0, 1]]`` times it; in rank 1 the
    value at the trivial subgroup becomes a unit ``u != 1 mod p^N``, giving
    the ``φ_e``-twisted section.
    """
    ctx = s.ctx
    if ctx.n == 2:
        H = next((H for H in s if H.order_exp == 1), None)
        if H is None:
            raise SectionError('A section of level 0 has no order-{} subgroup to mutate'.format(ctx.p))
        return mutate_section(s, H, ((1, 1), (0, 1)))
    if ctx.n == 1:
        u = ctx.modulus - 1 if ctx.p != 2 else 3
        if u % ctx.modulus == 1:
            raise ValueError('There is no unit other than 1 modulo {}'.format(ctx.modulus))
        return mutate_section(s, trivial_subgroup(ctx), ((u,),))
    raise UnsupportedRankError('No shipped mutation in rank {}'.format(ctx.n))
