import random

import pytest

from tpo.groups import (
    cyclic_group,
    symmetric_group,
    trivial_group,
)
from tpo.isogeny import build_power_section
from tpo.padic import Context


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def ctx_2_1_1():
    return Context(2, 1, 1)


@pytest.fixture
def ctx_2_1_2():
    return Context(2, 1, 2)


@pytest.fixture
def ctx_2_2_1():
    return Context(2, 2, 1)


@pytest.fixture
def ctx_2_2_2():
    return Context(2, 2, 2)


@pytest.fixture
def trivial():
    return trivial_group()


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def section_2_1_2(ctx_2_1_2):
    return build_power_section(ctx_2_1_2, 1)


@pytest.fixture
def section_2_2_2(ctx_2_2_2):
    return build_power_section(ctx_2_2_2, 1)
