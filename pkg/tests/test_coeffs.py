from fractions import Fraction

import pytest

from tpo.coeffs import (
    CoeffValue,
    coeff_act,
)
from tpo.isogeny import (
    Isogeny,
    compose,
)


def t(*v):
    return CoeffValue.variable(v)


class TestCoeffValue:

    def test_ring_arithmetic(self):
        x, y = t(1, 0), t(0, 1)
        assert (x + 1) ** 2 == x * x + 2 * x + 1
        assert (x + y) * (x - y) == x ** 2 - y ** 2
        assert (x - x).is_zero()
        assert 3 - x == -(x - 3)
        assert x ** 0 == 1

    def test_exact_rational_coefficients(self):
        x = t(1, 1)
        assert (x / 3) * 3 == x
        assert CoeffValue.constant(Fraction(1, 2)) + Fraction(1, 2) == CoeffValue.one()
        mono = (((1, 1), 1),)
        assert (x / 2).terms == ((mono, Fraction(1, 2)),)

    def test_like_terms_are_merged(self):
        x = t(2)
        mono = (((2,), 1),)
        value = CoeffValue([(mono, 1), (mono, -1), ((), 5)])
        assert value == 5
        assert x * x == CoeffValue({(((2,), 2),): 1})
        assert (x * x * 2).variables() == ((2,),)

    def test_zero(self):
        assert CoeffValue.zero().is_zero()
        assert CoeffValue.zero() == 0
        assert repr(CoeffValue.zero()) == '0'
        assert CoeffValue.constant(0).terms == ()

    def test_variables_are_reduced(self):
        assert CoeffValue.variable((5, -1), modulus=4) == t(1, 3)
        assert CoeffValue.variable((5, -1)) != t(1, 3)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            t(1) ** -1

    def test_repr(self):
        assert repr(2 * t(1, 0) + 1) == '1 + 2*t(1, 0)'
        assert repr(t(3) ** 2) == 't(3,)^2'

    def test_dict_round_trip(self):
        value = Fraction(3, 4) * t(1, 2) * t(0, 1) ** 2 - 7
        assert CoeffValue.from_dict(value.to_dict()) == value


class TestCoeffAct:

    def test_substitution(self, ctx_2_2_2):
        a = Isogeny(ctx_2_2_2, ((0, 2), (1, 0)))
        assert coeff_act(a, t(1, 0) * t(3, 1) + 5) == t(0, 2) * t(1, 2) + 5
        assert coeff_act(Isogeny.identity(ctx_2_2_2), t(3, 1)) == t(3, 1)

    def test_scalar_collapses_torsion(self, ctx_2_2_2):
        four = Isogeny.scalar(ctx_2_2_2, 4)
        assert coeff_act(four, t(1, 3) * t(2, 2)) == t(0, 0) ** 2

    def test_ring_homomorphism(self, ctx_2_2_2):
        a = Isogeny(ctx_2_2_2, ((1, 1), (0, 2)))
        x, y = t(1, 0) + 2, t(3, 3) - t(0, 1)
        assert coeff_act(a, x * y) == coeff_act(a, x) * coeff_act(a, y)
        assert coeff_act(a, x + y) == coeff_act(a, x) + coeff_act(a, y)

    def test_contravariance(self, ctx_2_2_2):
        a = Isogeny(ctx_2_2_2, ((1, 1), (0, 2)))
        b = Isogeny(ctx_2_2_2, ((0, 2), (1, 0)))
        x = t(1, 0) * t(1, 3) + t(2, 1)
        assert coeff_act(compose(b, a), x) == coeff_act(a, coeff_act(b, x))
