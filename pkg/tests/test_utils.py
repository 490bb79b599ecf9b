import pytest

from tpo.utils import (
    adjugate,
    determinant,
    hermite_normal_form,
    identity_matrix,
    is_prime,
    mat_mod,
    mat_mul,
    mat_vec,
    matrix,
    modular_kernel,
    p_adic_digits,
    scalar_matrix,
    solve_lower,
    transpose,
    valuation,
)


def test_matrix_normalizes_rows():
    assert matrix([[1, 2], (3, 4)]) == ((1, 2), (3, 4))
    assert identity_matrix(2) == ((1, 0), (0, 1))
    assert scalar_matrix(3, 5) == ((5, 0, 0), (0, 5, 0), (0, 0, 5))


def test_matrix_arithmetic():
    a = ((1, 2), (3, 4))
    b = ((0, 1), (1, 0))
    assert transpose(a) == ((1, 3), (2, 4))
    assert mat_mul(a, b) == ((2, 1), (4, 3))
    assert mat_vec(a, (1, -1)) == (-1, -1)
    assert mat_mod(((5, -1), (4, 9)), 4) == ((1, 3), (0, 1))


@pytest.mark.parametrize(
    'a, expected',
    [
        (((7,),), 7),
        (((1, 2), (3, 4)), -2),
        (((0, 2), (1, 0)), -2),
        (((2, 0, 0), (1, 3, 0), (4, 5, 6)), 36),
    ]
)
def test_determinant(a, expected):
    assert determinant(a) == expected


def test_adjugate():
    assert adjugate(((1, 2), (3, 4))) == ((4, -2), (-3, 1))
    a = ((2, 1, 0), (0, 1, 3), (1, 0, 1))
    assert mat_mul(a, adjugate(a)) == scalar_matrix(3, determinant(a))


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize(
    'x, p, expected',
    [
        (8, 2, 3),
        (-12, 2, 2),
        (7, 2, 0),
        (54, 3, 3),
        (0, 3, None),
    ]
)
def test_valuation(x, p, expected):
    assert valuation(x, p) == expected


@pytest.mark.parametrize(
    'm, p, expected',
    [
        (0, 2, []),
        (1, 2, [1]),
        (6, 2, [0, 1, 1]),
        (11, 3, [2, 0, 1]),
    ]
)
def test_p_adic_digits(m, p, expected):
    assert p_adic_digits(m, p) == expected
    assert sum(a * p ** j for j, a in enumerate(expected)) == m


class TestHermiteNormalForm:

    def test_reduces_to_lower_triangular(self):
        assert hermite_normal_form([(2, 0), (0, 2), (1, 1)], 2) == ((1, 0), (1, 2))

    def test_is_independent_of_generator_order(self):
        gens = [(4, 0), (0, 4), (2, 2), (0, 2)]
        assert hermite_normal_form(gens, 2) == hermite_normal_form(list(reversed(gens)), 2)
        assert hermite_normal_form(gens, 2) == ((2, 0), (0, 2))

    def test_negative_generators(self):
        assert hermite_normal_form([(-3,), (6,)], 1) == ((3,),)

    def test_rank_deficient_generators_raise(self):
        with pytest.raises(ValueError):
            hermite_normal_form([(1, 1), (2, 2)], 2)

    @pytest.mark.parametrize(
        'gens, modulus, expected',
        [
            ([(1, 1), (2, 0), (0, 2)], 2, ((1, 0), (1, 2))),
            ([(4, 0), (0, 4), (2, 2), (0, 2)], 2, ((2, 0), (0, 2))),
            ([(3, 1), (9, 0), (0, 9)], 9, ((3, 0), (1, 3))),
        ]
    )
    def test_lattices_containing_a_torsion_level(self, gens, modulus, expected):
        assert hermite_normal_form(gens, 2, modulus=modulus) == expected
        assert hermite_normal_form(gens, 2) == expected


def test_solve_lower():
    b = ((1, 0), (1, 2))
    assert solve_lower(b, (3, 5)) == (3, 1)
    assert solve_lower(b, (0, 1)) is None


@pytest.mark.parametrize(
    'rows, p, e, expected',
    [
        ([[1, 0]], 2, 1, ((2, 0), (0, 1))),
        ([[1, 1]], 2, 1, ((1, 0), (1, 2))),
        ([[2, 0], [0, 1]], 2, 2, ((2, 0), (0, 4))),
        ([[0, 0]], 3, 1, ((1, 0), (0, 1))),
    ]
)
def test_modular_kernel(rows, p, e, expected):
    gens = modular_kernel(rows, 2, p, e)
    assert hermite_normal_form(gens, 2) == expected
    q = p ** e
    assert all(x % q == 0 for g in gens for x in mat_vec(rows, g))
