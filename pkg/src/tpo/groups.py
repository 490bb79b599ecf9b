"""
Finite permutation groups, their products and wreath products, commuting
tuples of ``p``-power order elements (the points of ``hom(Λ, G)``) and their
classes under simultaneous conjugation.

Elements are image tuples, ``g[i]`` being the image of the point ``i``, and
``g * h`` means "apply ``h`` first". In ``G ≀ Σ_m`` acting on ``d·m`` points
the element ``(g_0, ..., g_{m-1}; σ)`` sends the point ``x`` of block ``b`` to
the point ``g_b(x)`` of block ``σ(b)``.
"""
__all__ = [
    'ClassTable',
    'CommutingTuple',
    'DEFAULT_GROUP_CAP',
    'Element',
    'FiniteGroup',
    'GroupHom',
    'ProductGroup',
    'WreathProduct',
    'abelian_subgroups',
    'base_inclusion',
    'block_component',
    'block_perm',
    'block_juxtaposition',
    'commuting_tuples',
    'conjugate',
    'conjugacy_classes',
    'conjugate_tuple',
    'cyclic_group',
    'direct_product',
    'fixed_cosets',
    'identity_hom',
    'inclusion',
    'invert',
    'make_group',
    'multiply',
    'perm_cycles',
    'perm_order',
    'perm_power',
    'product_splitting',
    'required_level',
    'subgroup',
    'symmetric_group',
    'trivial_group',
    'wreath_decode',
    'wreath_encode',
    'wreath_nabla',
    'wreath_product',
]

import logging
import math
import re

from dataclasses import dataclass
from functools import cached_property
from typing import (
    Any,
    Callable,
    Dict as DictType,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import networkx as nx

from sympy.combinatorics import (
    Permutation,
    PermutationGroup,
)

from .exceptions import (
    CapExceededError,
    GroupSpecError,
)
from .utils import valuation


logger = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 10 ** 6

Element = Tuple[int, ...]
CommutingTuple = Tuple[Element, ...]


def multiply(g: Element, h: Element) -> Element:
    """
    The product ``g * h``: apply ``h``, then ``g``.
    """
    return tuple(g[i] for i in h)


def invert(g: Element) -> Element:
    inv = [0] * len(g)
    for i, x in enumerate(g):
        inv[x] = i
    return tuple(inv)


def conjugate(g: Element, x: Element) -> Element:
    """
    ``g x g^{-1}``.
    """
    return multiply(multiply(g, x), invert(g))


def perm_cycles(g: Element) -> List[Tuple[int, ...]]:
    seen, cycles = set(), []
    for start in range(len(g)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = g[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = g[x]
        cycles.append(tuple(cycle))
    return cycles


def perm_order(g: Element) -> int:
    order = 1
    for c in perm_cycles(g):
        order = order * len(c) // math.gcd(order, len(c))
    return order


def perm_power(g: Element, e: int) -> Element:
    """
    ``g^e`` for any integer ``e``, by square-and-multiply on ``e mod |g|``.
    """
    e %= perm_order(g)
    result = tuple(range(len(g)))
    base = g
    while e:
        if e & 1:
            result = multiply(base, result)
        base = multiply(base, base)
        e >>= 1
    return result


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def _sympy_elements(degree: int, generators: Sequence[Element]) -> List[Element]:
    perms = [Permutation(list(g)) for g in generators] or [Permutation(list(range(degree)))]
    return sorted(tuple(x.array_form) for x in PermutationGroup(perms).generate())


def _sympy_order(degree: int, generators: Sequence[Element]) -> int:
    perms = [Permutation(list(g)) for g in generators] or [Permutation(list(range(degree)))]
    return int(PermutationGroup(perms).order())


class FiniteGroup:
    """
    A permutation group of a given degree, generated by image tuples.

    Elements are materialized lazily, subject to the size cap.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Element],
        name: str = '',
        cap: int = DEFAULT_GROUP_CAP,
        elements: Optional[Iterable[Element]] = None
    ):
        self.degree = degree
        self.identity: Element = tuple(range(degree))
        self.generators: Tuple[Element, ...] = tuple(
            sorted({tuple(g) for g in generators if tuple(g) != self.identity})
        )
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValueError('{} is not a permutation of degree {}'.format(g, degree))
        self.name = name or 'perm:{}:{}'.format(degree, self.generators)
        self.cap = cap
        if elements is not None:
            self.__dict__['elements'] = sorted(set(tuple(g) for g in elements))
        self._class_tables: DictType[Tuple[int, int], 'ClassTable'] = {}
        self._commuting: DictType[Tuple[int, int], List[CommutingTuple]] = {}

    def __repr__(self) -> str:
        return '{}({!r})'.format(self.__class__.__name__, self.name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.degree, self.generators) == (other.degree, other.generators) or (
            self.degree == other.degree and self.element_set == other.element_set
        )

    def __hash__(self) -> int:
        # equal groups share orbits and order whatever their generators
        return hash((self.degree, self.order, self.orbits))

    @cached_property
    def orbits(self) -> Tuple[Tuple[int, ...], ...]:
        """
        The orbits on ``0, ..., degree - 1``, each sorted, in order of least
        point.
        """
        graph = nx.Graph()
        graph.add_nodes_from(range(self.degree))
        for g in self.generators:
            graph.add_edges_from(enumerate(g))
        return tuple(sorted(tuple(sorted(c)) for c in nx.connected_components(graph)))

    @cached_property
    def order(self) -> int:
        if 'elements' in self.__dict__:
            return len(self.elements)
        if self.degree == 0:
            return 1
        return _sympy_order(self.degree, self.generators)

    @cached_property
    def elements(self) -> List[Element]:
        if self.order > self.cap:
            raise CapExceededError(
                'The group {} has {} elements, above the cap of {}'.format(self.name, self.order, self.cap)
            )
        if self.degree == 0:
            return [()]
        elements = _sympy_elements(self.degree, self.generators)
        logger.debug('Materialized %d elements of %s', len(elements), self.name)
        return elements

    @cached_property
    def element_set(self) -> FrozenSet[Element]:
        return frozenset(self.elements)

    def __contains__(self, g: Element) -> bool:
        return tuple(g) in self.element_set

    def is_abelian(self) -> bool:
        return all(multiply(g, h) == multiply(h, g) for g in self.generators for h in self.generators)

    def p_elements(self, p: int) -> List[Element]:
        return [g for g in self.elements if _is_p_power(perm_order(g), p)]

    def commuting_tuples(self, p: int, n: int) -> List[CommutingTuple]:
        if (p, n) not in self._commuting:
            self._commuting[(p, n)] = commuting_tuples(self, p, n)
        return self._commuting[(p, n)]

    def class_table(self, p: int, n: int) -> 'ClassTable':
        if (p, n) not in self._class_tables:
            self._class_tables[(p, n)] = ClassTable.build(self, p, n)
        return self._class_tables[(p, n)]

    def to_dict(self) -> DictType[str, Any]:
        return {'name': self.name, 'degree': self.degree, 'generators': [list(g) for g in self.generators]}


class ProductGroup(FiniteGroup):
    """
    The direct product of permutation groups acting on the disjoint union of
    their point sets, in order.
    """

    def __init__(self, factors: Sequence[FiniteGroup], cap: int = DEFAULT_GROUP_CAP):
        self.factors = tuple(factors)
        self.offsets = []
        offset = 0
        for G in self.factors:
            self.offsets.append(offset)
            offset += G.degree
        gens = [
            self.join([g if j == i else H.identity for j, H in enumerate(self.factors)])
            for i, G in enumerate(self.factors)
            for g in G.generators
        ]
        name = 'x'.join(
            '({})'.format(G.name) if isinstance(G, ProductGroup) else G.name for G in self.factors
        )
        super().__init__(offset, gens, name=name, cap=cap)
        order = math.prod(G.order for G in self.factors)
        if order > cap:
            raise CapExceededError('The product {} has {} elements, above the cap of {}'.format(name, order, cap))
        self.__dict__['order'] = order

    def split(self, g: Element) -> List[Element]:
        return [
            tuple(g[o + x] - o for x in range(G.degree))
            for o, G in zip(self.offsets, self.factors)
        ]

    def join(self, parts: Sequence[Element]) -> Element:
        return tuple(o + x for o, part in zip(self.offsets, parts) for x in part)


class WreathProduct(FiniteGroup):
    """
    ``G ≀ Σ_m`` as a permutation group on ``degree(G)·m`` points.
    """

    def __init__(self, base: FiniteGroup, m: int, cap: int = DEFAULT_GROUP_CAP):
        self.base = base
        self.m = m
        d = base.degree
        order = base.order ** m * math.factorial(m)
        name = '{}wrS{}'.format(
            '({})'.format(base.name) if isinstance(base, ProductGroup) else base.name, m
        )
        if order > cap:
            raise CapExceededError('The wreath product {} has {} elements, above the cap of {}'.format(name, order, cap))

        ident = [base.identity] * m
        gens = []
        if m:
            gens.extend(self.encode([g] + ident[1:], tuple(range(m))) for g in base.generators)
        for sigma in _symmetric_generators(m):
            gens.append(self.encode(ident, sigma))
        super().__init__(d * m, gens, name=name, cap=cap)
        self.__dict__['order'] = order

    def encode(self, base: Sequence[Element], perm: Sequence[int]) -> Element:
        return wreath_encode(self.base.degree, base, perm)

    def decode(self, w: Element) -> Tuple[Tuple[Element, ...], Tuple[int, ...]]:
        return wreath_decode(self.base.degree, self.m, w)

    def block_perm(self, w: Element) -> Tuple[int, ...]:
        return block_perm(self.base.degree, self.m, w)

    def component(self, w: Element, b: int) -> Element:
        """
        The base component ``g_b`` of ``w`` at the block ``b``.
        """
        return block_component(self.base.degree, w, b)

    def diagonal(self, g: Element) -> Element:
        return self.encode([g] * self.m, tuple(range(self.m)))

    def element_to_dict(self, w: Element) -> DictType[str, Any]:
        base, perm = self.decode(w)
        return {'base': [list(g) for g in base], 'perm': list(perm)}

    def element_from_dict(self, d: DictType[str, Any]) -> Element:
        return self.encode([tuple(g) for g in d['base']], tuple(d['perm']))


def wreath_encode(d: int, base: Sequence[Element], perm: Sequence[int]) -> Element:
    """
    The permutation of ``(g_0, ..., g_{m-1}; σ)`` on ``d·m`` points, for
    components of degree ``d``.
    """
    img = [0] * (d * len(perm))
    for b, g in enumerate(base):
        for x in range(d):
            img[b * d + x] = perm[b] * d + g[x]
    return tuple(img)


def wreath_decode(d: int, m: int, w: Element) -> Tuple[Tuple[Element, ...], Tuple[int, ...]]:
    perm = block_perm(d, m, w)
    base = tuple(
        tuple(w[b * d + x] - perm[b] * d for x in range(d)) for b in range(m)
    )
    return base, perm


def block_perm(d: int, m: int, w: Element) -> Tuple[int, ...]:
    return tuple(w[b * d] // d for b in range(m))


def block_component(d: int, w: Element, b: int) -> Element:
    target = w[b * d] // d
    return tuple(w[b * d + x] - target * d for x in range(d))


def _symmetric_generators(m: int) -> List[Element]:
    if m < 2:
        return []
    swap = (1, 0) + tuple(range(2, m))
    cycle = tuple((i + 1) % m for i in range(m))
    return [swap] if swap == cycle else [swap, cycle]


def trivial_group() -> FiniteGroup:
    return FiniteGroup(1, [], name='e')


def cyclic_group(k: int) -> FiniteGroup:
    if k < 1:
        raise ValueError('A cyclic group needs a positive order, got {}'.format(k))
    gens = [tuple((i + 1) % k for i in range(k))] if k > 1 else []
    return FiniteGroup(k, gens, name='C{}'.format(k))


def symmetric_group(m: int) -> FiniteGroup:
    if m < 0:
        raise ValueError('A symmetric group needs a non-negative degree, got {}'.format(m))
    return FiniteGroup(m, _symmetric_generators(m), name='S{}'.format(m))


def direct_product(*factors: FiniteGroup, cap: int = DEFAULT_GROUP_CAP) -> ProductGroup:
    return ProductGroup(factors, cap=cap)


def wreath_product(G: FiniteGroup, m: int, cap: int = DEFAULT_GROUP_CAP) -> WreathProduct:
    return WreathProduct(G, m, cap=cap)


def subgroup(G: FiniteGroup, elements: Iterable[Element], name: str = '') -> FiniteGroup:
    """
    The subgroup of ``G`` with the given (closed) element set, with a greedy
    generating set.
    """
    elements = sorted(set(tuple(g) for g in elements))
    gens: List[Element] = []
    span = {G.identity}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = _closure(gens, G.identity)
    if span != set(elements):
        raise ValueError('The given elements are not closed under multiplication')
    return FiniteGroup(G.degree, gens, name=name or '{}<{}>'.format(G.name, len(elements)), elements=elements)


def _closure(gens: Sequence[Element], identity: Element) -> Set[Element]:
    span = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = multiply(g, x)
                if y not in span:
                    span.add(y)
                    new.append(y)
        frontier = new
    return span


def abelian_subgroups(G: FiniteGroup) -> List[FiniteGroup]:
    """
    All abelian subgroups of ``G``, by brute-force extension of abelian
    subgroups by centralizing elements.
    """
    elements = G.elements
    found: Set[FrozenSet[Element]] = set()
    frontier = [frozenset([G.identity])]
    found.update(frontier)
    while frontier:
        new = []
        for A in frontier:
            for g in elements:
                if g in A or any(multiply(g, a) != multiply(a, g) for a in A):
                    continue
                B = frozenset(_closure(list(A) + [g], G.identity))
                if B not in found:
                    found.add(B)
                    new.append(B)
        frontier = new
    ordered = sorted(found, key=lambda A: (len(A), sorted(A)))
    return [subgroup(G, A, name='{}.A{}'.format(G.name, i)) for i, A in enumerate(ordered)]


def commuting_tuples(G: FiniteGroup, p: int, n: int) -> List[CommutingTuple]:
    """
    All ``n``-tuples of pairwise commuting ``p``-power order elements of
    ``G``, in lexicographic order.

    :param G: The group
    :type G: FiniteGroup

    :param p: The prime
    :type p: int

    :param n: The tuple length
    :type n: int

    :return: The tuples
    :rtype: list
    """
    P = G.p_elements(p)
    commutes: DictType[Element, Set[Element]] = {
        a: {b for b in P if multiply(a, b) == multiply(b, a)} for a in P
    }

    out: List[CommutingTuple] = []

    def extend(prefix: Tuple[Element, ...], candidates: List[Element]) -> None:
        if len(prefix) == n:
            out.append(prefix)
            return
        for b in candidates:
            extend(prefix + (b,), [c for c in candidates if c in commutes[b]])

    extend((), P)
    logger.debug('%d commuting %d-tuples of %d-elements in %s', len(out), n, p, G.name)
    return out


def conjugate_tuple(g: Element, t: CommutingTuple) -> CommutingTuple:
    ginv = invert(g)
    return tuple(multiply(multiply(g, x), ginv) for x in t)


@dataclass(frozen=True)
class ClassTable:
    """
    The classes of commuting tuples of a group under simultaneous conjugation:
    canonical representatives (lexicographically least members) in order,
    class sizes, and the map from every tuple to its representative.
    """
    representatives: Tuple[CommutingTuple, ...]
    sizes: DictType[CommutingTuple, int]
    canonical_map: DictType[CommutingTuple, CommutingTuple]

    @classmethod
    def build(cls, G: FiniteGroup, p: int, n: int) -> 'ClassTable':
        return cls.from_tuples(G, G.commuting_tuples(p, n))

    @classmethod
    def from_tuples(cls, G: FiniteGroup, tuples: Sequence[CommutingTuple]) -> 'ClassTable':
        graph = nx.Graph()
        graph.add_nodes_from(tuples)
        for g in G.generators:
            graph.add_edges_from((t, conjugate_tuple(g, t)) for t in tuples)

        sizes, canonical = {}, {}
        for component in nx.connected_components(graph):
            rep = min(component)
            sizes[rep] = len(component)
            for t in component:
                canonical[t] = rep
        reps = tuple(sorted(sizes))
        logger.debug('%d classes of %d tuples in %s', len(reps), len(tuples), G.name)
        return cls(reps, sizes, canonical)

    def __len__(self) -> int:
        return len(self.representatives)

    def canonical(self, t: CommutingTuple) -> CommutingTuple:
        return self.canonical_map[tuple(t)]


def conjugacy_classes(G: FiniteGroup, tuples: Sequence[CommutingTuple]) -> List[Tuple[CommutingTuple, int]]:
    """
    The classes of a conjugation-closed set of tuples, as pairs of canonical
    representative and class size.
    """
    table = ClassTable.from_tuples(G, tuples)
    return [(rep, table.sizes[rep]) for rep in table.representatives]


def fixed_cosets(G: FiniteGroup, j: 'GroupHom', t: CommutingTuple) -> List[Element]:
    """
    The least representatives ``g`` of the cosets ``gK`` of ``K = j(source)``
    fixed by every entry of ``t``, i.e. with ``g^{-1} t_i g ∈ K``.
    """
    K = {j(k) for k in j.source.elements}
    seen: Set[Element] = set()
    fixed = []
    for g in G.elements:
        if g in seen:
            continue
        seen.update(multiply(g, k) for k in K)
        ginv = invert(g)
        if all(multiply(multiply(ginv, x), g) in K for x in t):
            fixed.append(g)
    return fixed


@dataclass(frozen=True)
class GroupHom:
    """
    A homomorphism of permutation groups given by a function on elements.
    """
    source: FiniteGroup
    target: FiniteGroup
    func: Callable[[Element], Element]
    name: str = ''

    def __call__(self, g: Element) -> Element:
        return self.func(tuple(g))

    @property
    def images(self) -> Tuple[Element, ...]:
        return tuple(self(g) for g in self.source.generators)

    def apply_tuple(self, t: CommutingTuple) -> CommutingTuple:
        return tuple(self(x) for x in t)

    def is_homomorphism(self) -> bool:
        return all(
            self(multiply(s, x)) == multiply(self(s), self(x))
            for s in self.source.generators
            for x in self.source.elements
        ) and all(self(x) in self.target for x in self.source.generators)

    def is_injective(self) -> bool:
        return len({self(x) for x in self.source.elements}) == self.source.order


def _same_points(g: Element) -> Element:
    return g


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, _same_points, name='id')


def inclusion(K: FiniteGroup, G: FiniteGroup) -> GroupHom:
    """
    The inclusion of a subgroup acting on the same points.
    """
    if K.degree != G.degree:
        raise ValueError('{} and {} act on different point sets'.format(K.name, G.name))
    return GroupHom(K, G, _same_points, name='incl')


def block_juxtaposition(W1: WreathProduct, W2: WreathProduct) -> GroupHom:
    """
    ``Δ_{i,j}: (G≀Σ_i) × (G≀Σ_j) → G≀Σ_{i+j}``; on points this is the
    identity.
    """
    if W1.base != W2.base:
        raise ValueError('Juxtaposition needs wreath products over the same group')
    source = direct_product(W1, W2, cap=max(W1.cap, W2.cap))
    target = wreath_product(W1.base, W1.m + W2.m, cap=max(W1.cap, W2.cap))
    return GroupHom(source, target, _same_points, name='juxtapose')


def base_inclusion(W: WreathProduct) -> GroupHom:
    """
    The inclusion ``G^m → G ≀ Σ_m`` of the base group.
    """
    source = direct_product(*([W.base] * W.m), cap=W.cap)
    return GroupHom(source, W, _same_points, name='base')


def wreath_nabla(inner: WreathProduct, j: int) -> GroupHom:
    """
    ``∇: (G ≀ Σ_i) ≀ Σ_j → G ≀ Σ_{ij}``; on points this is the identity.
    """
    source = wreath_product(inner, j, cap=inner.cap)
    target = wreath_product(inner.base, inner.m * j, cap=inner.cap)
    return GroupHom(source, target, _same_points, name='nabla')


def product_splitting(W: WreathProduct) -> GroupHom:
    """
    ``δ: (G×K) ≀ Σ_m → (G ≀ Σ_m) × (K ≀ Σ_m)`` for a wreath product over a
    two-factor product group, as a relabelling of points.
    """
    P = W.base
    if not isinstance(P, ProductGroup) or len(P.factors) != 2:
        raise ValueError('{} is not a wreath product over a product of two groups'.format(W.name))
    G, K = P.factors
    WG, WK = wreath_product(G, W.m, cap=W.cap), wreath_product(K, W.m, cap=W.cap)
    target = direct_product(WG, WK, cap=W.cap)
    dG, dK = G.degree, K.degree
    points = []
    for b in range(W.m):
        points.extend(b * dG + x for x in range(dG))
        points.extend(dG * W.m + b * dK + y for y in range(dK))
    relabel = _Relabelling(tuple(points))
    return GroupHom(W, target, relabel, name='delta')


@dataclass(frozen=True)
class _Relabelling:
    points: Tuple[int, ...]

    def __call__(self, g: Element) -> Element:
        img = [0] * len(self.points)
        for x, y in enumerate(self.points):
            img[y] = self.points[g[x]]
        return tuple(img)


def required_level(G: FiniteGroup, p: int, m: int = 1) -> int:
    """
    The least working level at which every ``p``-power order element of
    ``G ≀ Σ_m`` has order dividing ``p^N``.
    """
    e_G = max((valuation(perm_order(g), p) or 0) for g in G.p_elements(p))
    e_m = 0
    while p ** (e_m + 1) <= m:
        e_m += 1
    return max(1, e_G + e_m)


_ATOM = re.compile(r'trivial|e|C(\d+)|S(\d+)')
_WREATH = re.compile(r'wrS(\d+)')


def _parse_product(spec: str, i: int, cap: int) -> Tuple[FiniteGroup, int]:
    factors = []
    G, i = _parse_wreath(spec, i, cap)
    factors.append(G)
    while i < len(spec) and spec[i] == 'x':
        G, i = _parse_wreath(spec, i + 1, cap)
        factors.append(G)
    if len(factors) == 1:
        return factors[0], i
    return direct_product(*factors, cap=cap), i


def _parse_wreath(spec: str, i: int, cap: int) -> Tuple[FiniteGroup, int]:
    G, i = _parse_atom(spec, i, cap)
    while True:
        match = _WREATH.match(spec, i)
        if not match:
            return G, i
        G = wreath_product(G, int(match.group(1)), cap=cap)
        i = match.end()


def _parse_atom(spec: str, i: int, cap: int) -> Tuple[FiniteGroup, int]:
    if i < len(spec) and spec[i] == '(':
        G, i = _parse_product(spec, i + 1, cap)
        if i >= len(spec) or spec[i] != ')':
            raise GroupSpecError('Unbalanced parentheses in group spec {!r}'.format(spec))
        return G, i + 1
    match = _ATOM.match(spec, i)
    if not match:
        raise GroupSpecError('Cannot parse group spec {!r} at position {}'.format(spec, i))
    if match.group(1):
        G = cyclic_group(int(match.group(1)))
    elif match.group(2):
        G = symmetric_group(int(match.group(2)))
    else:
        G = trivial_group()
    return G, match.end()


def _parse_perm_spec(spec: str, cap: int) -> FiniteGroup:
    try:
        _, degree, words = spec.split(':', 2)
        degree = int(degree)
    except ValueError:
        raise GroupSpecError('Expected perm:<degree>:<generators>, got {!r}'.format(spec))
    gens = []
    for word in filter(None, (w.strip() for w in words.split(';'))):
        img = list(range(degree))
        for cycle in re.findall(r'\(([^()]*)\)', word):
            points = [int(x) for x in cycle.replace(',', ' ').split()]
            if any(x >= degree or x < 0 for x in points) or len(set(points)) != len(points):
                raise GroupSpecError('Invalid cycle ({}) in {!r}'.format(cycle, spec))
            g = list(range(degree))
            for a, b in zip(points, points[1:] + points[:1]):
                g[a] = b
            img = list(multiply(tuple(img), tuple(g)))
        gens.append(tuple(img))
    return FiniteGroup(degree, gens, name=spec, cap=cap)


def make_group(spec: str, cap: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    """
    Builds a group from a spec: ``trivial`` or ``e``, ``C<k>``, ``S<m>``,
    products ``AxB``, wreath products ``<spec>wrS<m>``, parentheses, or
    ``perm:<degree>:<cycles>;<cycles>...`` with 0-based cycle notation.

    :param spec: The group spec
    :type spec: str

    :param cap: The element-count cap
    :type cap: int

    :return: The group
    :rtype: FiniteGroup
    """
    spec = spec.strip()
    if spec.startswith('perm:'):
        G = _parse_perm_spec(spec, cap)
    else:
        G, i = _parse_product(spec, 0, cap)
        if i != len(spec):
            raise GroupSpecError('Trailing characters in group spec {!r}'.format(spec))
    if G.order > cap:
        raise CapExceededError('The group {} has {} elements, above the cap of {}'.format(spec, G.order, cap))
    return G
