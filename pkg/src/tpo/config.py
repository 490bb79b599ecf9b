"""
Run configuration for the command-line front end.
"""
__all__ = [
    'DEFAULT_GRIDS',
    'FORMATS',
    'RunConfig',
    'SECTION_SOURCES',
    'parse_int_list',
    'section_level',
]

import argparse
import logging
import os

from dataclasses import (
    asdict,
    dataclass,
)
from typing import (
    Any,
    Dict as DictType,
    Optional,
    Tuple,
)

from .classfn import DEFAULT_AUT_CAP
from .exceptions import ConfigError
from .groups import DEFAULT_GROUP_CAP
from .utils import is_prime


logger = logging.getLogger(__name__)


FORMATS = ('json', 'csv')
SECTION_SOURCES = ('built', 'mutated')

# Per-suite defaults for parameters not given on the command line
DEFAULT_GRIDS: DictType[str, DictType[str, Tuple[Any, ...]]] = {
    'bijection': {'groups': ('e', 'C2'), 'm': (1, 2)},
    'census': {'groups': ('C2',), 'm': (2,)},
    'relations': {'groups': ('C2',), 'm': (1,), 'l': (1,)},
    'global-power': {'groups': ('C2',), 't': (1,), 'l': (1,)},
    'descent': {'groups': ('C2',), 'm': (2,)},
    'injection': {'groups': ('e', 'C2'), 'k': (1,)},
    'abelian-embedding': {'groups': ('S3',), 'k': (1,)},
    'subgroups': {'k': (1, 2)},
    'section': {'k': (2,)},
    'padic-sum': {'groups': ('C2',), 'm': (3,)},
    'diagonal': {'groups': ('C2',), 'k': (1,)},
    'adams': {'groups': ('C2',), 't': (1,), 'l': (0,)},
    'compatibility': {'groups': ('C2',), 'm': (2,)},
    'invariant-global-power': {'groups': ('C2',), 't': (1,), 'l': (0,)},
}


def parse_int_list(value: Optional[str]) -> Optional[Tuple[int, ...]]:
    """
    Parses a comma-separated list of integers; ``None`` stays ``None`` and
    an empty string gives an empty grid.
    """
    if value is None:
        return None
    try:
        return tuple(int(x) for x in value.split(',') if x.strip())
    except ValueError:
        raise ConfigError('Expected a comma-separated list of integers, got {!r}'.format(value))


def _parse_str_list(value: Optional[str]) -> Optional[Tuple[str, ...]]:
    if value is None:
        return None
    return tuple(x.strip() for x in value.split(',') if x.strip())


def _default(value: Any, default: Any) -> Any:
    return default if value is None else value


def section_level(p: int, m: int) -> int:
    """
    The largest ``k`` with ``p^k <= m``: sums of order ``m`` only involve
    subgroups of ``Λ*[p^k]``.
    """
    k = 0
    while p ** (k + 1) <= m:
        k += 1
    return k


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a command needs. Grid parameters (``groups``, ``m``, ``k``,
    ``t``, ``l``) are tuples, ``None`` meaning the command's default.
    """
    command: str
    p: int = 2
    n: int = 1
    level: Optional[int] = None
    groups: Optional[Tuple[str, ...]] = None
    m: Optional[Tuple[int, ...]] = None
    k: Optional[Tuple[int, ...]] = None
    t: Optional[Tuple[int, ...]] = None
    l: Optional[Tuple[int, ...]] = None
    suite: Optional[str] = None
    section: str = 'built'
    seed: int = 0
    samples: int = 20
    group_cap: int = DEFAULT_GROUP_CAP
    aut_cap: int = DEFAULT_AUT_CAP
    format: str = 'json'
    out: Optional[str] = None
    jobs: int = 1
    timings: bool = False
    verify: bool = False
    mod_transfer: bool = False
    classfn: Optional[str] = None

    def grid(self, name: str) -> Tuple[Any, ...]:
        """
        The values of a grid parameter, falling back to the suite default.
        """
        value = getattr(self, name)
        if value is None:
            value = DEFAULT_GRIDS.get(self.suite or self.command, {}).get(name)
        if value is None:
            raise ConfigError('The parameter {!r} is required for {}'.format(name, self.suite or self.command))
        return value

    def validate(self) -> 'RunConfig':
        if not is_prime(self.p):
            raise ConfigError('{} is not a prime'.format(self.p))
        if self.n < 1:
            raise ConfigError('The rank must be at least 1, got {}'.format(self.n))
        if self.level is not None and self.level < 1:
            raise ConfigError('The level must be at least 1, got {}'.format(self.level))
        for name in ('groups', 'm', 'k', 't', 'l'):
            value = getattr(self, name)
            if value is not None and not value:
                raise ConfigError('The grid for {!r} is empty'.format(name))
        for name in ('m', 'k', 't', 'l'):
            if any(x < 0 for x in getattr(self, name) or ()):
                raise ConfigError('The parameter {!r} must be non-negative'.format(name))
        if self.section not in SECTION_SOURCES and not os.path.isfile(self.section):
            raise ConfigError(
                'The section source must be one of {} or a JSON file, got {!r}'.format(SECTION_SOURCES, self.section)
            )
        if self.format not in FORMATS:
            raise ConfigError('Unknown output format {!r}'.format(self.format))
        if self.samples < 1:
            raise ConfigError('At least one sample is needed, got {}'.format(self.samples))
        if self.jobs < 1:
            raise ConfigError('The number of jobs must be positive, got {}'.format(self.jobs))
        if self.group_cap < 1 or self.aut_cap < 1:
            raise ConfigError('Caps must be positive')
        if self.command == 'power' and not self.classfn:
            raise ConfigError('The power command needs a class function file')
        logger.debug('Validated %s', self)
        return self

    def to_dict(self) -> DictType[str, Any]:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        """
        Builds and validates a config from parsed command-line arguments.
        """
        get = vars(args).get
        return cls(
            command=args.command,
            p=_default(get('p'), 2),
            n=_default(get('n'), 1),
            level=get('level'),
            groups=_parse_str_list(get('group')),
            m=parse_int_list(get('m')),
            k=parse_int_list(get('k')),
            t=parse_int_list(get('t')),
            l=parse_int_list(get('l')),
            suite=get('suite'),
            section=_default(get('section'), 'built'),
            seed=_default(get('seed'), 0),
            samples=_default(get('samples'), 20),
            group_cap=_default(get('group_cap'), DEFAULT_GROUP_CAP),
            aut_cap=_default(get('aut_cap'), DEFAULT_AUT_CAP),
            format=_default(get('format'), 'json'),
            out=get('out'),
            jobs=_default(get('jobs'), 1),
            timings=bool(get('timings')),
            verify=bool(get('verify')),
            mod_transfer=bool(get('mod_transfer')),
            classfn=get('classfn'),
        ).validate()
