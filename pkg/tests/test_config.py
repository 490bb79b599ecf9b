import argparse

import pytest

from tpo.config import (
    RunConfig,
    parse_int_list,
    section_level,
)
from tpo.exceptions import ConfigError


@pytest.mark.parametrize(
    'value, expected',
    [
        (None, None),
        ('', ()),
        ('1', (1,)),
        ('1, 2,3', (1, 2, 3)),
        ('0', (0,)),
    ]
)
def test_parse_int_list(value, expected):
    assert parse_int_list(value) == expected


def test_parse_int_list_rejects_words():
    with pytest.raises(ConfigError):
        parse_int_list('1,two')


@pytest.mark.parametrize('p, m, expected', [(2, 1, 0), (2, 2, 1), (2, 3, 1), (2, 4, 2), (3, 8, 1), (3, 9, 2), (2, 0, 0)])
def test_section_level(p, m, expected):
    assert section_level(p, m) == expected


class TestRunConfig:

    def test_grid_defaults(self):
        cfg = RunConfig('verify', suite='bijection')
        assert cfg.grid('groups') == ('e', 'C2')
        assert cfg.grid('m') == (1, 2)
        assert RunConfig('verify', suite='bijection', m=(3,)).grid('m') == (3,)
        assert RunConfig('census').grid('m') == (2,)

    def test_missing_grid(self):
        with pytest.raises(ConfigError):
            RunConfig('verify', suite='subgroups').grid('m')

    @pytest.mark.parametrize(
        'kwargs',
        [
            {'p': 4},
            {'n': 0},
            {'level': 0},
            {'m': ()},
            {'k': (1, -1)},
            {'section': 'no-such-file.json'},
            {'format': 'xml'},
            {'samples': 0},
            {'jobs': 0},
            {'group_cap': 0},
        ]
    )
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig('verify', suite='bijection', **kwargs).validate()

    def test_power_needs_a_class_function(self):
        with pytest.raises(ConfigError):
            RunConfig('power').validate()

    def test_zero_values_are_kept(self):
        args = argparse.Namespace(command='verify', suite='adams', p=3, n=2, seed=0, samples=None, t='0', l='0')
        cfg = RunConfig.from_args(args)
        assert (cfg.p, cfg.n, cfg.seed, cfg.samples) == (3, 2, 0, 20)
        assert cfg.grid('t') == (0,)
        assert cfg.to_dict()['t'] == [0]
