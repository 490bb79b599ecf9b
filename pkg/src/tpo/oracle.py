"""
Brute-force verifiers for the classification and the identities satisfied by
power operations. Each verifier returns a ``VerificationReport``; a failing
report always carries a witness.

Class counts are recomputed here from the group multiplication alone: tuples
by exhaustive products and classes by conjugating with every element.
"""
__all__ = [
    'VerificationReport',
    'brute_force_classes',
    'verify_abelian_embedding',
    'verify_adams',
    'verify_bijection',
    'verify_descent',
    'verify_diagonal',
    'verify_global_power',
    'verify_injection',
    'verify_invariant_global_power',
    'verify_padic_sum',
    'verify_relations',
    'verify_section',
    'verify_section_compatibility',
    'verify_subgroup_counts',
]

import itertools
import logging
import random
import time

from dataclasses import (
    dataclass,
    field,
)
from typing import (
    Any,
    Dict as DictType,
    FrozenSet,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from .classfn import (
    DEFAULT_AUT_CAP,
    ClassFunctionBase,
    adams,
    aut_act,
    aut_average,
    delta_function,
    external_product,
    is_aut_invariant,
    power_mod_ideal,
    power_mod_transfer,
    power_op,
    random_class_function,
    restrict,
    transfer,
)
from .classify import (
    LevelDatum,
    SumDatum,
    assemble,
    classify,
    classify_transitive,
    diagonal_datum,
    diagonal_tuple,
    enumerate_sum_data,
    standard_representative,
)
from .groups import (
    CommutingTuple,
    FiniteGroup,
    abelian_subgroups,
    base_inclusion,
    block_juxtaposition,
    direct_product,
    invert,
    multiply,
    perm_order,
    product_splitting,
    symmetric_group,
    trivial_group,
    wreath_nabla,
    wreath_product,
)
from .isogeny import (
    Section,
    act_on_section,
    build_power_section,
    composition_series_matrices,
    is_power_section,
    kernel,
)
from .padic import (
    Context,
    enumerate_subgroups,
    full_torsion,
    subgroup_image,
)
from .utils import (
    mat_mul,
    p_adic_digits,
    scalar_matrix,
)


logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """
    The outcome of one check on one instance.
    """
    check: str
    params: DictType[str, Any]
    passed: bool
    witness: Optional[DictType[str, Any]] = None
    counts: DictType[str, int] = field(default_factory=dict)
    wall_time: Optional[float] = None
    note: str = ''

    @property
    def status(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def to_dict(self, timings: bool = False) -> DictType[str, Any]:
        d = {
            'check': self.check,
            'params': self.params,
            'status': self.status,
            'witness': self.witness,
            'counts': self.counts,
            'note': self.note,
        }
        if timings:
            d['wall_time'] = self.wall_time
        return d


class _Timer:

    def __enter__(self) -> '_Timer':
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc: Any) -> None:
        self.elapsed = time.perf_counter() - self.start


def _report(check: str, params: DictType[str, Any], timer: _Timer, passed: bool, **kwargs: Any) -> VerificationReport:
    report = VerificationReport(check, params, passed, wall_time=timer.elapsed, **kwargs)
    if not passed and report.witness is None:
        raise AssertionError('A failing report needs a witness')
    logger.info('%s %s: %s (%.3fs)', check, params, report.status, timer.elapsed)
    return report


def _tuple_repr(t: CommutingTuple) -> List[List[int]]:
    return [list(g) for g in t]


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def brute_force_classes(G: FiniteGroup, p: int, n: int) -> DictType[CommutingTuple, int]:
    """
    Maps every commuting ``n``-tuple of ``p``-power order elements of ``G`` to
    the index of its class under simultaneous conjugation by all of ``G``.
    """
    P = [g for g in G.elements if _is_p_power(perm_order(g), p)]
    tuples = [
        t for t in itertools.product(P, repeat=n)
        if all(multiply(a, b) == multiply(b, a) for a, b in itertools.combinations(t, 2))
    ]
    index: DictType[CommutingTuple, int] = {}
    for t in tuples:
        if t in index:
            continue
        k = len(set(index.values()))
        for g in G.elements:
            ginv = invert(g)
            index[tuple(multiply(multiply(g, x), ginv) for x in t)] = k
    return index


def _params(ctx: Context, G: Optional[FiniteGroup] = None, **extra: Any) -> DictType[str, Any]:
    d: DictType[str, Any] = ctx.to_dict()
    if G is not None:
        d['group'] = G.name
    d.update(extra)
    return d


def verify_bijection(ctx: Context, G: FiniteGroup, m: int) -> VerificationReport:
    """
    Classes of commuting tuples in ``G ≀ Σ_m`` against the sums of order
    ``m``: equal counts, ``classify ∘ standard_representative`` the identity,
    and distinct sums landing in distinct classes.
    """
    params = _params(ctx, G, m=m)
    with _Timer() as timer:
        W = wreath_product(G, m, cap=G.cap)
        index = brute_force_classes(W, ctx.p, ctx.n)
        classes = len(set(index.values()))
        data = enumerate_sum_data(ctx, G, m)
        counts = {'classes': classes, 'sum_data': len(data)}
        witness = None
        if classes != len(data):
            witness = {'reason': 'count mismatch'}
        seen: DictType[int, SumDatum] = {}
        for datum in data:
            if witness:
                break
            t = standard_representative(ctx, G, datum)
            back = classify(ctx, G, t)
            if back != datum:
                witness = {'reason': 'round trip', 'datum': datum.to_dict(), 'classified': back.to_dict()}
            elif index.get(t) is None:
                witness = {'reason': 'not a commuting tuple', 'datum': datum.to_dict(), 'tuple': _tuple_repr(t)}
            elif index[t] in seen:
                witness = {
                    'reason': 'two sums in one class',
                    'datum': datum.to_dict(),
                    'other': seen[index[t]].to_dict(),
                }
            else:
                seen[index[t]] = datum
    return _report('bijection', params, timer, witness is None, witness=witness, counts=counts)


def _first_difference(lhs: ClassFunctionBase, rhs: ClassFunctionBase) -> Optional[DictType[str, Any]]:
    for rep in lhs.representatives:
        a, b = lhs.value(rep), rhs.value(rep)
        if a != b:
            return {'class': _tuple_repr(rep), 'lhs': repr(a), 'rhs': repr(b)}
    return None


def verify_relations(
    ctx: Context,
    G: FiniteGroup,
    m: int,
    l: int,
    section: Section,
    seed: int = 0,
    samples: int = 20,
    other: Optional[FiniteGroup] = None
) -> VerificationReport:
    """
    The four relations for ``P = P^φ`` on random class functions:

    1. ``Δ_{m,l}* P_{m+l}(f) = P_m(f) × P_l(f)``;
    2. ``δ* (P_m(f) × P_m(g)) = P_m(f × g)`` over ``G × K``;
    3. the restriction of ``P_m(f)`` to ``G^m`` is ``P_1(f)^{×m}``;
    4. ``P_{m+l}(f_1 + f_2) = Σ_j Tr_{j, m+l-j}(P_j(f_1) × P_{m+l-j}(f_2))``.
    """
    K = other if other is not None else G
    params = _params(ctx, G, m=m, l=l, seed=seed, samples=samples, other=K.name)
    rng = random.Random(seed)
    total = m + l
    witness = None
    with _Timer() as timer:
        W = {j: wreath_product(G, j, cap=G.cap) for j in range(total + 1)}
        for sample in range(samples):
            f1 = random_class_function(ctx, G, rng)
            f2 = random_class_function(ctx, G, rng)
            g = random_class_function(ctx, K, rng)
            P = {j: power_op(f1, j, section) for j in range(total + 1)}

            lhs = restrict(P[total], block_juxtaposition(W[m], W[l]))
            diff = _first_difference(lhs, external_product(P[m], P[l]))
            if diff:
                witness = dict(relation=1, sample=sample, **diff)
                break

            WGK = wreath_product(direct_product(G, K), m, cap=G.cap)
            lhs = restrict(external_product(P[m], power_op(g, m, section)), product_splitting(WGK))
            diff = _first_difference(lhs, power_op(external_product(f1, g), m, section))
            if diff:
                witness = dict(relation=2, sample=sample, **diff)
                break

            if m:
                lhs = restrict(P[m], base_inclusion(W[m]))
                diff = _first_difference(lhs, external_product(*([P[1]] * m)))
                if diff:
                    witness = dict(relation=3, sample=sample, **diff)
                    break

            lhs = power_op(f1 + f2, total, section)
            rhs = None
            for j in range(total + 1):
                term = transfer(
                    external_product(P[j], power_op(f2, total - j, section)),
                    block_juxtaposition(W[j], W[total - j])
                )
                rhs = term if rhs is None else rhs + term
            diff = _first_difference(lhs, rhs)
            if diff:
                witness = dict(relation=4, sample=sample, **diff)
                break
    return _report('relations', params, timer, witness is None, witness=witness, counts={'samples': samples})


def _delta_functions(ctx: Context, G: FiniteGroup) -> List[Tuple[str, ClassFunctionBase]]:
    out = []
    for rep in G.class_table(ctx.p, ctx.n).representatives:
        for i in range(ctx.n):
            v = tuple(int(i == j) for j in range(ctx.n))
            out.append(('delta {} t{}'.format(_tuple_repr(rep), list(v)), delta_function(ctx, G, rep, v)))
    return out


def _global_power_witness(
    ctx: Context,
    G: FiniteGroup,
    t: int,
    l: int,
    section: Section,
    functions: Sequence[Tuple[str, ClassFunctionBase]]
) -> Tuple[Optional[DictType[str, Any]], int]:
    p = ctx.p
    inner = wreath_product(G, p ** l, cap=G.cap)
    nabla = wreath_nabla(inner, p ** t)
    reps = nabla.source.class_table(p, ctx.n).representatives
    for label, f in functions:
        lhs = power_op(f, p ** (t + l), section)
        rhs = power_op(power_op(f, p ** l, section), p ** t, section)
        for rep in reps:
            a, b = lhs.value(nabla.apply_tuple(rep)), rhs.value(rep)
            if a != b:
                return {'function': label, 'class': _tuple_repr(rep), 'lhs': repr(a), 'rhs': repr(b)}, len(reps)
    return None, len(reps)


def verify_global_power(ctx: Context, G: FiniteGroup, t: int, l: int, section: Section) -> VerificationReport:
    """
    ``∇* P_{p^{t+l}} = P_{p^t} ∘ P_{p^l}`` on all delta class functions. A
    pass is consistent with ``section`` being a power section; it is no
    claim about other sections.
    """
    params = _params(ctx, G, t=t, l=l, section_level=section.level)
    with _Timer() as timer:
        witness, classes = _global_power_witness(ctx, G, t, l, section, _delta_functions(ctx, G))
    return _report(
        'global-power', params, timer, witness is None, witness=witness, counts={'classes': classes},
        note='' if witness else 'consistent with a power section'
    )


def verify_invariant_global_power(
    ctx: Context,
    G: FiniteGroup,
    t: int,
    l: int,
    section: Section,
    seed: int = 0,
    samples: int = 2,
    aut_cap: int = DEFAULT_AUT_CAP
) -> VerificationReport:
    """
    The global power identity on Aut-averaged random functions, which holds
    for every section.
    """
    params = _params(ctx, G, t=t, l=l, seed=seed, samples=samples)
    rng = random.Random(seed)
    with _Timer() as timer:
        functions = [
            ('averaged #{}'.format(i), aut_average(random_class_function(ctx, G, rng), cap=aut_cap))
            for i in range(samples)
        ]
        witness, classes = _global_power_witness(ctx, G, t, l, section, functions)
    return _report('invariant-global-power', params, timer, witness is None, witness=witness, counts={'classes': classes})


def verify_descent(
    ctx: Context,
    G: FiniteGroup,
    m: int,
    sections: Sequence[Section],
    seed: int = 0,
    aut_cap: int = DEFAULT_AUT_CAP
) -> VerificationReport:
    """
    For an Aut-averaged ``f``, ``P^s_m(f)`` is Aut-invariant and the same for
    every section ``s``.
    """
    params = _params(ctx, G, m=m, seed=seed, sections=len(sections))
    rng = random.Random(seed)
    witness = None
    with _Timer() as timer:
        f = aut_average(random_class_function(ctx, G, rng), cap=aut_cap)
        first = power_op(f, m, sections[0]).materialize()
        if not is_aut_invariant(first):
            witness = {'reason': 'P(f) is not invariant'}
        for i, s in enumerate(sections[1:], start=1):
            if witness:
                break
            diff = _first_difference(first, power_op(f, m, s))
            if diff:
                witness = dict(reason='sections disagree', section=i, **diff)
    return _report('descent', params, timer, witness is None, witness=witness)


def verify_section_compatibility(
    ctx: Context,
    G: FiniteGroup,
    m: int,
    section: Section,
    gamma: Any,
    seed: int = 0
) -> VerificationReport:
    """
    ``P^s(f^γ) = P^{γs}(f)`` for a random ``f``.
    """
    params = _params(ctx, G, m=m, seed=seed)
    rng = random.Random(seed)
    with _Timer() as timer:
        f = random_class_function(ctx, G, rng)
        lhs = power_op(aut_act(gamma, f), m, section)
        witness = _first_difference(lhs, power_op(f, m, act_on_section(gamma, section)))
    return _report('compatibility', params, timer, witness is None, witness=witness)


def verify_injection(ctx: Context, G: FiniteGroup, k: int) -> VerificationReport:
    """
    Every class of ``G ≀ Σ_{p^k}`` is transitive or conjugate into the
    block-diagonal ``(G ≀ Σ_{p^{k-1}})^p``.
    """
    p = ctx.p
    params = _params(ctx, G, k=k)
    with _Timer() as timer:
        W = wreath_product(G, p ** k, cap=G.cap)
        index = brute_force_classes(W, p, ctx.n)
        covered: Set[int] = set()
        for t, c in index.items():
            if len(classify(ctx, G, t).parts) == 1:
                covered.add(c)
        if k:
            inner = wreath_product(G, p ** (k - 1), cap=G.cap)
            block = direct_product(*([inner] * p), cap=G.cap)
            for t in block.commuting_tuples(p, ctx.n):
                covered.add(index[t])
        missing = sorted(set(index.values()) - covered)
        witness = None
        if missing:
            rep = min(t for t, c in index.items() if c == missing[0])
            witness = {'class': _tuple_repr(rep)}
    return _report(
        'injection', params, timer, witness is None, witness=witness,
        counts={'classes': len(set(index.values())), 'covered': len(covered)}
    )


def verify_abelian_embedding(ctx: Context, G: FiniteGroup, k: int) -> VerificationReport:
    """
    The pairs ``(H, [α])`` with ``|H| = p^k`` for the abelian subgroups
    ``A ≤ G`` map onto those for ``G``: each pair for ``A`` is sent to
    ``(H, [ι∘α])``, which must also be the classification in ``G ≀ Σ_{p^k}``
    of the standard ``A ≀ Σ_{p^k}`` representative, and every pair for ``G``
    must be hit.
    """
    m = ctx.p ** k
    params = _params(ctx, G, k=k)
    witness = None
    with _Timer() as timer:
        table = G.class_table(ctx.p, ctx.n)
        targets = {datum for datum in enumerate_sum_data(ctx, G, m) if datum.is_single}
        subgroups = abelian_subgroups(G)
        reached: Set[SumDatum] = set()
        sources = 0
        for A in subgroups:
            for datum in enumerate_sum_data(ctx, A, m):
                if not datum.is_single:
                    continue
                sources += 1
                part = datum.parts[0]
                image = SumDatum.from_parts([LevelDatum(part.subgroup, table.canonical(part.alpha))])
                classified = classify(ctx, G, standard_representative(ctx, A, datum))
                if classified != image:
                    witness = {
                        'reason': 'classification does not commute with inclusion',
                        'subgroup': A.name,
                        'datum': datum.to_dict(),
                        'image': image.to_dict(),
                        'classified': classified.to_dict(),
                    }
                    break
                reached.add(image)
            if witness:
                break
        if witness is None:
            missing = sorted(targets - reached, key=lambda d: d.parts[0].sort_key)
            if missing:
                witness = {'reason': 'pair not reached', 'datum': missing[0].to_dict()}
    return _report(
        'abelian-embedding', params, timer, witness is None, witness=witness,
        counts={'abelian_subgroups': len(subgroups), 'pairs': len(targets), 'source_pairs': sources}
    )


def _brute_force_subgroups(ctx: Context, k: int) -> Set[FrozenSet[Tuple[int, ...]]]:
    q = ctx.modulus
    points = [v.coords for v in ctx.points(min(k, ctx.level))]
    found = set()
    for gens in itertools.product(points, repeat=ctx.n):
        span = {tuple(0 for _ in range(ctx.n))}
        frontier = list(span)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = tuple((a + b) % q for a, b in zip(x, g))
                    if y not in span:
                        span.add(y)
                        new.append(y)
            frontier = new
        if len(span) == ctx.p ** k:
            found.add(frozenset(span))
    return found


def verify_subgroup_counts(ctx: Context, k: int) -> VerificationReport:
    """
    The enumerated subgroups of order ``p^k`` against closures of
    ``n``-tuples of torsion points.
    """
    params = _params(ctx, k=k)
    with _Timer() as timer:
        listed = {frozenset(v.coords for v in H.elements()) for H in enumerate_subgroups(ctx, k)}
        brute = _brute_force_subgroups(ctx, k)
        witness = None
        if listed != brute:
            extra = sorted(sorted(s) for s in brute ^ listed)[0]
            witness = {'subgroup': [list(v) for v in extra]}
    return _report(
        'subgroups', params, timer, witness is None, witness=witness,
        counts={'enumerated': len(listed), 'brute_force': len(brute)}
    )


def verify_section(ctx: Context, level: int) -> VerificationReport:
    """
    The built power section: the order-``p`` conditions in rank 2, the same
    value along every composition series, scalar values on ``Λ*[p^k]`` and
    the power-section identity.
    """
    params = _params(ctx, section_level=level)
    witness = None
    with _Timer() as timer:
        s = build_power_section(ctx, level)
        p, n = ctx.p, ctx.n
        torsion_p = full_torsion(ctx, 1)
        for H, phi in s.items():
            if ctx.n == 2 and H.order_exp == 1:
                if mat_mul(phi.mat, phi.mat) != scalar_matrix(n, p):
                    witness = {'reason': 'square is not p', 'subgroup': H.to_dict()}
                elif kernel(phi) != H or subgroup_image(phi, torsion_p) != H:
                    witness = {'reason': 'kernel or image', 'subgroup': H.to_dict()}
            if witness is None and composition_series_matrices(s, H) != {phi.mat}:
                witness = {'reason': 'depends on the composition series', 'subgroup': H.to_dict()}
            if witness:
                break
        for k in range(level + 1):
            if witness is None and s[full_torsion(ctx, k)].mat != scalar_matrix(n, p ** k):
                witness = {'reason': 'not scalar on the full torsion', 'k': k}
        if witness is None:
            failure = is_power_section(s)
            if failure:
                witness = dict(reason='not a power section', **failure.to_dict())
    return _report('section', params, timer, witness is None, witness=witness, counts={'subgroups': len(s)})


def verify_padic_sum(ctx: Context, G: FiniteGroup, m: int) -> VerificationReport:
    """
    Sums of order ``m`` are all assembled from sums of orders ``p^j``, one
    factor per unit of the ``j``-th base-``p`` digit of ``m``.
    """
    params = _params(ctx, G, m=m)
    with _Timer() as timer:
        factors = []
        for j, a in enumerate(p_adic_digits(m, ctx.p)):
            factors.extend([enumerate_sum_data(ctx, G, ctx.p ** j)] * a)
        image = {assemble(combo) for combo in itertools.product(*factors)}
        data = enumerate_sum_data(ctx, G, m)
        missing = [d for d in data if d not in image]
        witness = {'datum': missing[0].to_dict()} if missing else None
    return _report(
        'padic-sum', params, timer, witness is None, witness=witness,
        counts={'sum_data': len(data), 'image': len(image)}
    )


def verify_diagonal(ctx: Context, G: FiniteGroup, k: int) -> VerificationReport:
    """
    ``classify(Δt; β) = (H, [t q_H*])`` for every class ``t`` of ``G`` and
    every transitive tuple ``β`` of ``Σ_{p^k}``, ``H`` being the subgroup
    of ``β``.
    """
    params = _params(ctx, G, k=k)
    witness = None
    checked = 0
    with _Timer() as timer:
        S = symmetric_group(ctx.p ** k)
        E = trivial_group()
        for beta in S.class_table(ctx.p, ctx.n).representatives:
            datum = classify(ctx, E, beta)
            if len(datum.parts) != 1:
                continue
            H = classify_transitive(ctx, E, beta).subgroup
            for t in G.class_table(ctx.p, ctx.n).representatives:
                checked += 1
                got = classify(ctx, G, diagonal_tuple(G, t, beta))
                expected = SumDatum((diagonal_datum(G, H, t),))
                if got != expected:
                    witness = {
                        'beta': _tuple_repr(beta), 'tuple': _tuple_repr(t),
                        'classified': got.to_dict(), 'expected': expected.to_dict(),
                    }
                    break
            if witness:
                break
    return _report('diagonal', params, timer, witness is None, witness=witness, counts={'checked': checked})


def verify_adams(
    ctx: Context,
    G: FiniteGroup,
    a: int,
    b: int,
    section: Section,
    seed: int = 0
) -> VerificationReport:
    """
    ``ψ^{p^a} ∘ ψ^{p^b} = ψ^{p^{a+b}}``, ``ψ^{p^k}`` equal to the component of
    ``P/I`` at ``Λ*[p^k]``, and ``P/I`` agreeing with ``P/J`` on diagonal
    pairs.
    """
    params = _params(ctx, G, a=a, b=b, seed=seed)
    rng = random.Random(seed)
    k = a + b
    witness = None
    with _Timer() as timer:
        f = random_class_function(ctx, G, rng)
        diff = _first_difference(adams(adams(f, b), a), adams(f, k))
        if diff:
            witness = dict(reason='composition', **diff)
        if witness is None:
            T = full_torsion(ctx, k)
            quotient = power_mod_ideal(f, ctx.n * k, section, subgroups=[T])[T]
            diff = _first_difference(quotient, adams(f, k))
            if diff:
                witness = dict(reason='adams against P/I', **diff)
        if witness is None:
            by_ideal = power_mod_ideal(f, k, section)
            by_transfer = power_mod_transfer(f, k, section)
            for H, component in by_ideal.items():
                for rep in component.representatives:
                    lhs, rhs = component[rep], by_transfer[diagonal_datum(G, H, rep)]
                    if lhs != rhs:
                        witness = {
                            'reason': 'P/I against P/J', 'subgroup': H.to_dict(),
                            'class': _tuple_repr(rep), 'lhs': repr(lhs), 'rhs': repr(rhs),
                        }
                        break
                if witness:
                    break
    return _report('adams', params, timer, witness is None, witness=witness)
