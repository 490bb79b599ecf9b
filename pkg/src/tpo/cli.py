"""
The ``tpo`` command: subgroup tables, class censuses, power sections, power
operations on class functions and the verification suites.

Exit codes: 0 on success, 1 when a verification fails, 2 on a usage or input
error and 3 when a precision requirement or a size cap is exceeded.
"""
__all__ = [
    'COMMANDS',
    'EXIT_CAP',
    'EXIT_FAIL',
    'EXIT_OK',
    'EXIT_USAGE',
    'SUITES',
    'build_parser',
    'main',
    'run_suite',
]

import argparse
import csv
import io
import itertools
import json
import logging
import sys

from concurrent.futures import ProcessPoolExecutor
from typing import (
    Any,
    Callable,
    Dict as DictType,
    List,
    Optional,
    Sequence,
    Tuple,
)

from .classfn import (
    load_class_function,
    power_mod_transfer,
    power_op,
    unit_generators,
)
from .config import (
    FORMATS,
    RunConfig,
    section_level,
)
from .exceptions import (
    CapExceededError,
    ClassificationError,
    ConfigError,
    GroupSpecError,
    MissingEntryError,
    PrecisionError,
    SectionError,
    TPOError,
    UnsupportedRankError,
)
from .groups import (
    FiniteGroup,
    make_group,
    required_level,
)
from .isogeny import (
    Isogeny,
    Section,
    build_power_section,
    default_mutation,
    is_power_section,
    load_section,
    save_section,
)
from .oracle import (
    VerificationReport,
    verify_abelian_embedding,
    verify_adams,
    verify_bijection,
    verify_descent,
    verify_diagonal,
    verify_global_power,
    verify_injection,
    verify_invariant_global_power,
    verify_padic_sum,
    verify_relations,
    verify_section,
    verify_section_compatibility,
    verify_subgroup_counts,
)
from .padic import (
    Context,
    enumerate_subgroups,
)
from .version import __version__


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _context(cfg: RunConfig, needed: int) -> Context:
    """
    The working context: ``--level`` when given, else the least level the
    instance needs (and at least that of a section file). A ``--level``
    below what the instance needs is a precision error.
    """
    if cfg.level is not None:
        if cfg.level < needed:
            raise PrecisionError(
                'The instance needs level {}, but --level {} was given'.format(needed, cfg.level)
            )
        return Context(cfg.p, cfg.n, cfg.level)
    level = max(1, needed)
    if cfg.section not in ('built', 'mutated'):
        level = max(level, load_section(cfg.section).ctx.level)
    return Context(cfg.p, cfg.n, level)


def _section(cfg: RunConfig, ctx: Context, level: int) -> Section:
    if cfg.section == 'built':
        return build_power_section(ctx, level)
    if cfg.section == 'mutated':
        return default_mutation(build_power_section(ctx, level))
    s = load_section(cfg.section)
    if s.ctx != ctx:
        raise SectionError('The section in {} has context {}, expected {}'.format(cfg.section, s.ctx, ctx))
    if s.level < level:
        raise SectionError('The section in {} has level {}, {} is needed'.format(cfg.section, s.level, level))
    return s


def _group(cfg: RunConfig, spec: str) -> FiniteGroup:
    return make_group(spec, cap=cfg.group_cap)


def _bijection(cfg: RunConfig, spec: str, m: int) -> VerificationReport:
    G = _group(cfg, spec)
    return verify_bijection(_context(cfg, required_level(G, cfg.p, m)), G, m)


def _relations(cfg: RunConfig, spec: str, m: int, l: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, required_level(G, cfg.p, m + l))
    s = _section(cfg, ctx, section_level(cfg.p, m + l))
    return verify_relations(ctx, G, m, l, s, seed=cfg.seed, samples=cfg.samples)


def _global_power(cfg: RunConfig, spec: str, t: int, l: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, required_level(G, cfg.p, cfg.p ** (t + l)))
    return verify_global_power(ctx, G, t, l, _section(cfg, ctx, t + l))


def _invariant_global_power(cfg: RunConfig, spec: str, t: int, l: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, required_level(G, cfg.p, cfg.p ** (t + l)))
    return verify_invariant_global_power(
        ctx, G, t, l, _section(cfg, ctx, t + l), seed=cfg.seed, samples=cfg.samples, aut_cap=cfg.aut_cap
    )


def _descent(cfg: RunConfig, spec: str, m: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, required_level(G, cfg.p, m))
    built = build_power_section(ctx, section_level(cfg.p, m))
    others = [_section(cfg, ctx, built.level)] if cfg.section != 'built' else []
    if not others:
        try:
            others = [default_mutation(built)]
        except (SectionError, ValueError) as e:
            logger.info('Comparing the built section with itself: %s', e)
            others = [built]
    return verify_descent(ctx, G, m, [built] + others, seed=cfg.seed, aut_cap=cfg.aut_cap)


def _injection(cfg: RunConfig, spec: str, k: int) -> VerificationReport:
    G = _group(cfg, spec)
    return verify_injection(_context(cfg, required_level(G, cfg.p, cfg.p ** k)), G, k)


def _abelian_embedding(cfg: RunConfig, spec: str, k: int) -> VerificationReport:
    G = _group(cfg, spec)
    return verify_abelian_embedding(_context(cfg, required_level(G, cfg.p, cfg.p ** k)), G, k)


def _subgroups(cfg: RunConfig, k: int) -> VerificationReport:
    return verify_subgroup_counts(_context(cfg, k), k)


def _section_check(cfg: RunConfig, k: int) -> VerificationReport:
    return verify_section(_context(cfg, k), k)


def _padic_sum(cfg: RunConfig, spec: str, m: int) -> VerificationReport:
    G = _group(cfg, spec)
    return verify_padic_sum(_context(cfg, required_level(G, cfg.p, m)), G, m)


def _diagonal(cfg: RunConfig, spec: str, k: int) -> VerificationReport:
    G = _group(cfg, spec)
    return verify_diagonal(_context(cfg, required_level(G, cfg.p, cfg.p ** k)), G, k)


def _adams(cfg: RunConfig, spec: str, a: int, b: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, max(a + b, required_level(G, cfg.p, cfg.p ** (a + b))))
    return verify_adams(ctx, G, a, b, _section(cfg, ctx, a + b), seed=cfg.seed)


def _compatibility(cfg: RunConfig, spec: str, m: int) -> VerificationReport:
    G = _group(cfg, spec)
    ctx = _context(cfg, required_level(G, cfg.p, m))
    gens = unit_generators(ctx)
    gamma = gens[0] if gens else Isogeny.identity(ctx).mat
    return verify_section_compatibility(ctx, G, m, _section(cfg, ctx, section_level(cfg.p, m)), gamma, seed=cfg.seed)


# suite name -> (grid parameter names, runner)
SUITES: DictType[str, Tuple[Tuple[str, ...], Callable[..., VerificationReport]]] = {
    'bijection': (('groups', 'm'), _bijection),
    'relations': (('groups', 'm', 'l'), _relations),
    'global-power': (('groups', 't', 'l'), _global_power),
    'descent': (('groups', 'm'), _descent),
    'injection': (('groups', 'k'), _injection),
    'abelian-embedding': (('groups', 'k'), _abelian_embedding),
    'subgroups': (('k',), _subgroups),
    'section': (('k',), _section_check),
    'padic-sum': (('groups', 'm'), _padic_sum),
    'diagonal': (('groups', 'k'), _diagonal),
    'adams': (('groups', 't', 'l'), _adams),
    'compatibility': (('groups', 'm'), _compatibility),
    'invariant-global-power': (('groups', 't', 'l'), _invariant_global_power),
}


def _run_instance(cfg: RunConfig, suite: str, values: Tuple[Any, ...]) -> VerificationReport:
    return SUITES[suite][1](cfg, *values)


def run_suite(cfg: RunConfig) -> List[VerificationReport]:
    """
    Runs every instance of the suite's grid, in grid order; with more than
    one job the instances run in worker processes.
    """
    names, _ = SUITES[cfg.suite]
    grid = list(itertools.product(*(cfg.grid(name) for name in names)))
    logger.info('Running %d instance(s) of %s', len(grid), cfg.suite)
    if cfg.jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as executor:
            return list(executor.map(_run_instance, itertools.repeat(cfg), itertools.repeat(cfg.suite), grid))
    return [_run_instance(cfg, cfg.suite, values) for values in grid]


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_cell(x: Any) -> str:
    return json.dumps(x, sort_keys=True)


def _emit(cfg: RunConfig, payload: Any, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    if cfg.format == 'csv':
        text = _csv_text(header, rows)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + '\n'
    if cfg.out:
        with open(cfg.out, 'w') as f:
            f.write(text)
        logger.info('Wrote %s', cfg.out)
    else:
        sys.stdout.write(text)


def cmd_subgroups(cfg: RunConfig) -> int:
    ks = cfg.grid('k')
    ctx = _context(cfg, max(ks))
    rows = []
    for k in ks:
        for H in enumerate_subgroups(ctx, k):
            rows.append({'k': k, 'order': H.order, 'generators': repr(H), 'basis': [list(r) for r in H.basis]})
    _emit(
        cfg,
        {'params': ctx.to_dict(), 'count': len(rows), 'subgroups': rows},
        ('k', 'order', 'generators', 'basis'),
        [(r['k'], r['order'], r['generators'], _json_cell(r['basis'])) for r in rows]
    )
    return EXIT_OK


def cmd_census(cfg: RunConfig) -> int:
    reports = [_bijection(cfg, spec, m) for spec in cfg.grid('groups') for m in cfg.grid('m')]
    rows = [
        {
            'group': r.params['group'], 'm': r.params['m'],
            'classes': r.counts['classes'], 'sum_data': r.counts['sum_data'],
            'match': r.counts['classes'] == r.counts['sum_data'],
        }
        for r in reports
    ]
    _emit(
        cfg,
        {'params': {'p': cfg.p, 'n': cfg.n}, 'census': rows},
        ('group', 'm', 'classes', 'sum_data', 'match'),
        [tuple(r[c] for c in ('group', 'm', 'classes', 'sum_data', 'match')) for r in rows]
    )
    return EXIT_OK if all(r['match'] for r in rows) else EXIT_FAIL


def cmd_section(cfg: RunConfig) -> int:
    level = cfg.level if cfg.k is None and cfg.level is not None else max(cfg.grid('k'))
    ctx = _context(cfg, level)
    s = _section(cfg, ctx, level)
    failure = is_power_section(s)
    payload = {'section': s.to_dict(), 'power_section': failure is None}
    if failure is not None:
        payload['witness'] = failure.to_dict()
    status = EXIT_OK
    if cfg.verify:
        report = verify_section(ctx, level) if cfg.section == 'built' else None
        if report is not None:
            payload['report'] = report.to_dict(cfg.timings)
            status = EXIT_OK if report.passed else EXIT_FAIL
        elif failure is not None:
            status = EXIT_FAIL
    _emit(
        cfg,
        payload,
        ('subgroup', 'matrix'),
        [(repr(H), _json_cell(phi.to_list())) for H, phi in s.items()]
    )
    return status


def cmd_power(cfg: RunConfig) -> int:
    f = load_class_function(cfg.classfn, cap=cfg.group_cap)
    ctx = f.ctx
    if (ctx.p, ctx.n) != (cfg.p, cfg.n):
        logger.info('Using p=%d, n=%d from %s', ctx.p, ctx.n, cfg.classfn)
    results = []
    rows: List[Tuple[Any, ...]] = []
    for m in cfg.grid('m'):
        needed = required_level(f.group, ctx.p, m)
        if needed > ctx.level:
            raise PrecisionError('P_{} on {} needs level {}, the function has level {}'.format(
                m, f.group.name, needed, ctx.level
            ))
        s = _section(cfg, ctx, section_level(ctx.p, m))
        if cfg.mod_transfer:
            k = section_level(ctx.p, m)
            if ctx.p ** k != m:
                raise ValueError('The quotient by the transfer ideal needs m a power of {}, got {}'.format(ctx.p, m))
            result = power_mod_transfer(f, k, s).to_dict()
            rows.extend((m, _json_cell(e['datum']), _json_cell(e['value'])) for e in result['entries'])
        else:
            result = power_op(f, m, s, cap=cfg.group_cap).materialize().to_dict()
            rows.extend((m, _json_cell(e['class']), _json_cell(e['value'])) for e in result['entries'])
        results.append(result)
    _emit(cfg, {'results': results}, ('m', 'class', 'value'), rows)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in SUITES:
        raise ConfigError('Unknown suite {!r}; choose from {}'.format(cfg.suite, ', '.join(sorted(SUITES))))
    reports = run_suite(cfg)
    _emit(
        cfg,
        {'suite': cfg.suite, 'seed': cfg.seed, 'reports': [r.to_dict(cfg.timings) for r in reports]},
        ('check', 'params', 'status', 'counts', 'witness'),
        [
            (r.check, _json_cell(r.params), r.status, _json_cell(r.counts), _json_cell(r.witness))
            for r in reports
        ]
    )
    for r in reports:
        if not r.passed:
            logger.warning('%s %s failed: %s', r.check, r.params, r.witness)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


COMMANDS: DictType[str, Callable[[RunConfig], int]] = {
    'subgroups': cmd_subgroups,
    'census': cmd_census,
    'section': cmd_section,
    'power': cmd_power,
    'verify': cmd_verify,
}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--p', type=int, help='the prime (default 2)')
    parser.add_argument('--n', type=int, help='the rank (default 1)')
    parser.add_argument('--level', type=int, help='the working level N (derived when omitted)')
    parser.add_argument('--format', choices=FORMATS, help='output format (default json)')
    parser.add_argument('--out', help='output file (default stdout)')
    parser.add_argument('--group-cap', type=int, help='maximum number of group elements')
    parser.add_argument('--aut-cap', type=int, help='maximum number of candidate automorphisms')
    parser.add_argument('--timings', action='store_true', help='include wall times in reports')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='tpo', description=__doc__.strip().splitlines()[0])
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='store_true')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('subgroups', help='list the subgroups of order p^k')
    _common(p)
    p.add_argument('--k', help='comma-separated orders exponents')

    p = sub.add_parser('census', help='count classes of commuting tuples in wreath products')
    _common(p)
    p.add_argument('--group', help='comma-separated group specs')
    p.add_argument('--m', help='comma-separated wreath degrees')

    p = sub.add_parser('section', help='build a power section and check it')
    _common(p)
    p.add_argument('--k', help='the section level')
    p.add_argument('--section', help="'built', 'mutated' or a section JSON file")
    p.add_argument('--verify', action='store_true', help='exit 1 unless the section passes every check')

    p = sub.add_parser('power', help='evaluate a power operation on a class function')
    _common(p)
    p.add_argument('classfn', help='class function JSON file')
    p.add_argument('--m', help='comma-separated wreath degrees')
    p.add_argument('--section', help="'built', 'mutated' or a section JSON file")
    p.add_argument('--mod-transfer', action='store_true', help='reduce modulo the transfer ideal')

    p = sub.add_parser('verify', help='run a verification suite')
    _common(p)
    p.add_argument('suite', choices=sorted(SUITES))
    for name in ('group', 'm', 'k', 't', 'l'):
        p.add_argument('--{}'.format(name), help='comma-separated grid values')
    p.add_argument('--section', help="'built', 'mutated' or a section JSON file")
    p.add_argument('--seed', type=int)
    p.add_argument('--samples', type=int, help='random class functions per instance')
    p.add_argument('--jobs', type=int, help='worker processes')
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (
        ConfigError, GroupSpecError, UnsupportedRankError, SectionError,
        ClassificationError, MissingEntryError, ValueError
    ) as e:
        logger.error('%s: %s', type(e).__name__, e)
        return EXIT_USAGE
    except (PrecisionError, CapExceededError) as e:
        logger.error('%s: %s', type(e).__name__, e)
        return EXIT_CAP
    except TPOError as e:
        logger.error('%s: %s', type(e).__name__, e)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
