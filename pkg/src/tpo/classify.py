"""
The classification of commuting tuples in ``G ≀ Σ_m`` by sums of pairs
``⊕_i (H_i, [α_i])``, where ``H_i`` is a finite subgroup of ``Λ*`` with
``Σ |H_i| = m`` and ``[α_i]`` a class of ``hom(Λ_{H_i}, G)``.

A tuple ``α_i`` for ``Λ_H`` is always written against the canonical HNF basis
of ``Λ_H`` (``padic.annihilator_basis``): its ``j``-th entry is the image of
the ``j``-th basis column. All maps between such lattices are mediated by
explicit integer change-of-basis matrices.
"""
__all__ = [
    'LevelDatum',
    'SumDatum',
    'assemble',
    'aut_on_sum_datum',
    'canonical_tuple',
    'classify',
    'classify_transitive',
    'compose_wreath_data',
    'diagonal_datum',
    'diagonal_tuple',
    'enumerate_sum_data',
    'evaluate',
    'juxtapose',
    'orbit_blocks',
    'precompose',
    'restrict_to_blocks',
    'standard_representative',
    'transitive_representative',
]

import itertools
import logging

from dataclasses import dataclass
from typing import (
    Any,
    Dict as DictType,
    Iterable,
    List,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
import sympy

from .exceptions import (
    ClassificationError,
    PrecisionError,
)
from .groups import (
    CommutingTuple,
    Element,
    FiniteGroup,
    WreathProduct,
    block_component,
    block_perm,
    multiply,
    perm_order,
    perm_power,
    wreath_decode,
    wreath_encode,
)
from .isogeny import Isogeny
from .padic import (
    Context,
    FiniteSubgroup,
    LatticeBasis,
    annihilator_basis,
    enumerate_subgroups,
    subgroup_from_annihilator,
    subgroup_image,
    subgroup_preimage,
)
from .utils import (
    IntMatrix,
    mat_mul,
    matrix,
    transpose,
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelDatum:
    """
    A pair ``(H, [α])``: a finite subgroup and the canonical representative
    of a class of ``hom(Λ_H, G)``.
    """
    subgroup: FiniteSubgroup
    alpha: CommutingTuple

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        return (self.subgroup.order_exp, self.subgroup.sort_key, self.alpha)

    def __lt__(self, other: 'LevelDatum') -> bool:
        return self.sort_key < other.sort_key

    def to_dict(self) -> DictType[str, Any]:
        return {'subgroup': self.subgroup.to_dict(), 'tuple': [list(g) for g in self.alpha]}

    @classmethod
    def from_dict(cls, d: DictType[str, Any]) -> 'LevelDatum':
        return cls(FiniteSubgroup.from_dict(d['subgroup']), tuple(tuple(g) for g in d['tuple']))


@dataclass(frozen=True)
class SumDatum:
    """
    A formal sum of pairs, kept as a sorted tuple of parts.
    """
    parts: Tuple[LevelDatum, ...]

    @classmethod
    def from_parts(cls, parts: Iterable[LevelDatum]) -> 'SumDatum':
        return cls(tuple(sorted(parts, key=lambda part: part.sort_key)))

    @property
    def order(self) -> int:
        return sum(part.subgroup.order for part in self.parts)

    @property
    def is_single(self) -> bool:
        return len(self.parts) == 1

    def __add__(self, other: 'SumDatum') -> 'SumDatum':
        return SumDatum.from_parts(self.parts + other.parts)

    def to_dict(self) -> DictType[str, Any]:
        return {'parts': [part.to_dict() for part in self.parts]}

    @classmethod
    def from_dict(cls, d: DictType[str, Any]) -> 'SumDatum':
        return cls.from_parts(LevelDatum.from_dict(part) for part in d['parts'])

    def __repr__(self) -> str:
        if not self.parts:
            return '0'
        return ' ⊕ '.join('({!r}, {})'.format(part.subgroup, part.alpha) for part in self.parts)


def evaluate(t: CommutingTuple, coords: Sequence[int], identity: Element) -> Element:
    """
    The image ``Π_i t_i^{c_i}`` of the lattice vector with coordinates ``c``
    under the homomorphism given by the commuting tuple ``t``.
    """
    result = identity
    for x, c in zip(t, coords):
        if c:
            result = multiply(result, perm_power(x, c))
    return result


def precompose(t: CommutingTuple, M: IntMatrix) -> CommutingTuple:
    """
    The tuple of ``α ∘ M`` for the homomorphism ``α`` given by ``t`` and an
    integer matrix ``M`` (columns are the new basis vectors in the old
    coordinates).
    """
    identity = tuple(range(len(t[0])))
    return tuple(evaluate(t, col, identity) for col in transpose(M))


def canonical_tuple(G: FiniteGroup, ctx: Context, t: CommutingTuple) -> CommutingTuple:
    return G.class_table(ctx.p, ctx.n).canonical(t)


def orbit_blocks(m: int, perms: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    The orbits of ``{0, ..., m - 1}`` under the given block permutations,
    each sorted, ordered by least element.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(m))
    for sigma in perms:
        graph.add_edges_from((b, sigma[b]) for b in range(m))
    return sorted(sorted(orbit) for orbit in nx.connected_components(graph))


def restrict_to_blocks(d: int, t: CommutingTuple, blocks: Sequence[int]) -> CommutingTuple:
    """
    The restriction of a tuple to an invariant set of blocks, reindexed in
    the given order.
    """
    m = len(t[0]) // d
    index = {b: k for k, b in enumerate(blocks)}
    out = []
    for w in t:
        base, perm = wreath_decode(d, m, w)
        out.append(wreath_encode(d, [base[b] for b in blocks], [index[perm[b]] for b in blocks]))
    return tuple(out)


def juxtapose(d: int, n: int, tuples: Sequence[CommutingTuple]) -> CommutingTuple:
    """
    The tuple acting on consecutive runs of blocks by the given tuples.
    """
    out = []
    for i in range(n):
        base: List[Element] = []
        perm: List[int] = []
        for t in tuples:
            m = len(t[i]) // d
            b, s = wreath_decode(d, m, t[i])
            perm.extend(len(base) + x for x in s)
            base.extend(b)
        out.append(wreath_encode(d, base, perm))
    return tuple(out)


def _stabilizer(perms: Sequence[Sequence[int]], n: int) -> LatticeBasis:
    orders = [perm_order(tuple(s)) for s in perms]
    gens = [tuple(o if i == j else 0 for i in range(n)) for j, o in enumerate(orders)]
    for l in itertools.product(*(range(o) for o in orders)):
        pos = 0
        for sigma, e in zip(perms, l):
            for _ in range(e):
                pos = sigma[pos]
        if pos == 0 and any(l):
            gens.append(l)
    return LatticeBasis.from_generators(gens, n)


def classify_transitive(ctx: Context, G: FiniteGroup, t: CommutingTuple) -> LevelDatum:
    """
    The pair ``(H, [ᾱ])`` of a tuple in ``G ≀ Σ_m`` acting transitively on
    the blocks: ``Λ_H`` is the stabilizer of the blocks and ``ᾱ`` reads off
    the block-0 component on the basis of ``Λ_H``.

    :param ctx: The context
    :type ctx: Context

    :param G: The base group
    :type G: FiniteGroup

    :param t: A commuting tuple of ``G ≀ Σ_m``
    :type t: tuple

    :return: The pair
    :rtype: LevelDatum
    """
    d = G.degree
    m = len(t[0]) // d
    perms = [block_perm(d, m, w) for w in t]
    if len(orbit_blocks(m, perms)) != 1:
        raise ClassificationError('The tuple does not act transitively on its {} blocks'.format(m))

    stab = _stabilizer(perms, ctx.n)
    H = subgroup_from_annihilator(ctx, stab)
    alpha = tuple(block_component(d, evaluate(t, s, tuple(range(d * m))), 0) for s in stab.columns)
    return LevelDatum(H, canonical_tuple(G, ctx, alpha))


def classify(ctx: Context, G: FiniteGroup, t: CommutingTuple) -> SumDatum:
    """
    The sum of pairs of a commuting tuple in ``G ≀ Σ_m``, one pair per orbit
    of the blocks.
    """
    d = G.degree
    m = len(t[0]) // d
    perms = [block_perm(d, m, w) for w in t]
    return SumDatum.from_parts(
        classify_transitive(ctx, G, restrict_to_blocks(d, t, orbit))
        for orbit in orbit_blocks(m, perms)
    )


def transitive_representative(ctx: Context, G: FiniteGroup, part: LevelDatum) -> CommutingTuple:
    """
    The tuple induced from ``ᾱ`` on ``Λ_H``: the blocks are the canonical
    representatives ``x`` of ``Z^n / Λ_H`` and ``e_i`` sends the block of
    ``x`` to the block of ``r(x + e_i)`` with component ``ᾱ(x + e_i - r(x + e_i))``.
    """
    S = annihilator_basis(part.subgroup)
    reps = S.coset_representatives()
    index = {x: b for b, x in enumerate(reps)}
    d = G.degree
    out = []
    for i in range(ctx.n):
        base, perm = [], []
        for x in reps:
            y = tuple(a + (j == i) for j, a in enumerate(x))
            r = S.reduce(y)
            coords = S.coordinates(tuple(a - b for a, b in zip(y, r)))
            base.append(evaluate(part.alpha, coords, G.identity))
            perm.append(index[r])
        out.append(wreath_encode(d, base, perm))
    return tuple(out)


def standard_representative(ctx: Context, G: FiniteGroup, datum: SumDatum) -> CommutingTuple:
    """
    A commuting tuple of ``G ≀ Σ_m`` classifying to ``datum``, the parts
    acting on consecutive runs of blocks in order.
    """
    return juxtapose(G.degree, ctx.n, [transitive_representative(ctx, G, part) for part in datum.parts])


def enumerate_sum_data(ctx: Context, G: FiniteGroup, m: int) -> List[SumDatum]:
    """
    All sums of pairs of total order ``m``, without duplicates, in sorted
    order.

    :param ctx: The context
    :type ctx: Context

    :param G: The group
    :type G: FiniteGroup

    :param m: The total order
    :type m: int

    :return: The sums
    :rtype: list
    """
    top = 0
    while ctx.p ** (top + 1) <= m:
        top += 1
    if top > ctx.level:
        raise PrecisionError(
            'Sums of total order {} need cyclic subgroups of order {}^{}, beyond level {}'.format(
                m, ctx.p, top, ctx.level
            )
        )
    table = G.class_table(ctx.p, ctx.n)
    levels: List[LevelDatum] = []
    k = 0
    while ctx.p ** k <= m:
        for H in enumerate_subgroups(ctx, k):
            levels.extend(LevelDatum(H, rep) for rep in table.representatives)
        k += 1
    levels.sort(key=lambda part: part.sort_key)

    out: List[SumDatum] = []

    def extend(start: int, remaining: int, chosen: Tuple[LevelDatum, ...]) -> None:
        if remaining == 0:
            out.append(SumDatum(chosen))
            return
        for i in range(start, len(levels)):
            size = levels[i].subgroup.order
            if size <= remaining:
                extend(i, remaining - size, chosen + (levels[i],))

    extend(0, m, ())
    logger.debug('%d sums of order %d over %s at %s', len(out), m, G.name, ctx)
    return out


def assemble(data: Iterable[SumDatum]) -> SumDatum:
    return SumDatum.from_parts(part for datum in data for part in datum.parts)


def diagonal_datum(G: FiniteGroup, H: FiniteSubgroup, t: CommutingTuple) -> LevelDatum:
    """
    ``(H, [t ∘ q_H*])``: the restriction of ``t`` to ``Λ_H``.
    """
    S = annihilator_basis(H)
    return LevelDatum(H, canonical_tuple(G, H.ctx, precompose(t, S.mat)))


def diagonal_tuple(G: FiniteGroup, t: CommutingTuple, beta: CommutingTuple) -> CommutingTuple:
    """
    The tuple ``(Δ t_i; β_i)`` of ``G ≀ Σ_k`` for a tuple ``t`` of ``G`` and
    a tuple ``β`` of ``Σ_k``.
    """
    k = len(beta[0])
    return tuple(wreath_encode(G.degree, [g] * k, b) for g, b in zip(t, beta))


def _change_of_basis(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    # U with a @ U = b, required integral
    u = sympy.Matrix(a).inv() * sympy.Matrix(b)
    if not all(x.is_integer for x in u):
        raise ClassificationError('{} is not an integral change of basis into {}'.format(b, a))
    return matrix(u.tolist())


def compose_wreath_data(ctx: Context, inner: WreathProduct, outer: SumDatum) -> SumDatum:
    """
    The sum of pairs over ``G`` of an iterated wreath tuple, from its sum
    over ``inner = G ≀ Σ_{p^j}``: each part ``(H, [α])`` splits along the
    classification of ``α`` into pairs ``(T, [β])`` with ``T`` the pullback
    ``{v : S_Hᵀ v ∈ K}``.
    """
    G = inner.base
    parts = []
    for part in outer.parts:
        S = annihilator_basis(part.subgroup)
        for inner_part in classify(ctx, G, part.alpha).parts:
            T = subgroup_preimage(transpose(S.mat), inner_part.subgroup)
            U = _change_of_basis(
                mat_mul(S.mat, annihilator_basis(inner_part.subgroup).mat),
                annihilator_basis(T).mat
            )
            parts.append(LevelDatum(T, canonical_tuple(G, ctx, precompose(inner_part.alpha, U))))
    return SumDatum.from_parts(parts)


def aut_on_sum_datum(
    ctx: Context,
    G: FiniteGroup,
    sigma: Union[Isogeny, IntMatrix],
    datum: SumDatum
) -> SumDatum:
    """
    The action of an automorphism ``σ`` of ``Λ*`` on sums: ``(H, [α])``
    goes to ``(σH, [α ∘ C])`` where ``C = S_H⁻¹ σᵀ S_{σH}``. This matches
    ``classify(t ∘ σᵀ)``.
    """
    sigma = sigma if isinstance(sigma, Isogeny) else Isogeny(ctx, sigma)
    if not sigma.is_automorphism:
        raise ValueError('{} is not invertible mod {}'.format(sigma.mat, ctx.p))
    parts = []
    for part in datum.parts:
        image = subgroup_image(sigma, part.subgroup)
        C = _change_of_basis(
            annihilator_basis(part.subgroup).mat,
            mat_mul(sigma.dual, annihilator_basis(image).mat)
        )
        parts.append(LevelDatum(image, canonical_tuple(G, ctx, precompose(part.alpha, C))))
    return SumDatum.from_parts(parts)
