from fractions import Fraction

import pytest

from tpo.exceptions import PrecisionError
from tpo.padic import (
    Context,
    FiniteSubgroup,
    LatticeBasis,
    annihilator_basis,
    canonicalize,
    elem_order,
    enumerate_subgroups,
    full_torsion,
    subgroup_from_annihilator,
    subgroup_image,
    subgroup_preimage,
    trivial_subgroup,
)


class TestContext:

    @pytest.mark.parametrize('p, n, level', [(4, 1, 1), (2, 0, 1), (3, 2, 0)])
    def test_invalid_parameters(self, p, n, level):
        with pytest.raises(ValueError):
            Context(p, n, level)

    def test_points(self):
        ctx = Context(3, 2, 2)
        assert ctx.modulus == 9
        assert ctx.point('1/3', 0).coords == (3, 0)
        assert ctx.point(Fraction(-1, 9), 1).coords == (8, 0)
        assert len(list(ctx.points())) == 81
        assert len(list(ctx.points(1))) == 9

    def test_point_beyond_level(self):
        with pytest.raises(PrecisionError):
            Context(2, 1, 1).point('1/4')

    def test_point_rank(self):
        with pytest.raises(ValueError):
            Context(2, 2, 1).point('1/2')


def test_elem_order():
    ctx = Context(2, 2, 3)
    assert elem_order(ctx.point(0, 0)) == 1
    assert elem_order(ctx.point('1/2', 0)) == 2
    assert elem_order(ctx.point('1/8', '1/2')) == 8


def test_lattice_basis():
    L = LatticeBasis.from_generators([(2, 0), (1, 1)], 2)
    assert L.mat == ((1, 0), (1, 2))
    assert L.det == 2
    assert L.contains((3, 1))
    assert not L.contains((1, 0))
    assert L.coset_representatives() == [(0, 0), (0, 1)]
    assert L.reduce((3, 4)) == (0, 1)
    assert L.change_of_basis(LatticeBasis(((2, 0), (0, 2)))) == ((2, 0), (-1, 1))


class TestEnumerateSubgroups:

    @pytest.mark.parametrize(
        'p, n, level, k, expected',
        [
            (2, 2, 1, 1, 3),
            (3, 2, 1, 1, 4),
            (5, 2, 1, 1, 6),
            (2, 2, 2, 2, 7),
            (3, 1, 2, 2, 1),
            (2, 1, 3, 2, 1),
            (2, 2, 1, 3, 0),
        ]
    )
    def test_counts(self, p, n, level, k, expected):
        assert len(enumerate_subgroups(Context(p, n, level), k)) == expected

    @pytest.mark.parametrize('p, expected', [(2, 37), (3, 76)])
    def test_total_count_of_full_torsion(self, p, expected):
        ctx = Context(p, 2, 3)
        assert sum(len(enumerate_subgroups(ctx, k)) for k in range(7)) == expected

    def test_order_p_subgroups_in_basis_order(self, ctx_2_2_1):
        expected = [
            canonicalize(ctx_2_2_1, [ctx_2_2_1.point('1/2', 0)]),
            canonicalize(ctx_2_2_1, [ctx_2_2_1.point('1/2', '1/2')]),
            canonicalize(ctx_2_2_1, [ctx_2_2_1.point(0, '1/2')]),
        ]
        assert list(enumerate_subgroups(ctx_2_2_1, 1)) == expected

    def test_orders_and_elements(self):
        ctx = Context(3, 2, 2)
        for k in range(5):
            for H in enumerate_subgroups(ctx, k):
                assert H.order_exp == k
                assert len({v.coords for v in H.elements()}) == 3 ** k


class TestFiniteSubgroup:

    def test_trivial_and_full(self, ctx_2_2_2):
        assert trivial_subgroup(ctx_2_2_2).order == 1
        assert full_torsion(ctx_2_2_2, 1).order == 4
        assert full_torsion(ctx_2_2_2, 2).order == 16
        assert full_torsion(ctx_2_2_2, 1).is_subgroup_of(full_torsion(ctx_2_2_2, 2))
        assert not full_torsion(ctx_2_2_2, 2).is_subgroup_of(full_torsion(ctx_2_2_2, 1))

    def test_full_torsion_beyond_level(self, ctx_2_2_1):
        with pytest.raises(PrecisionError):
            full_torsion(ctx_2_2_1, 2)

    def test_canonical_form_ignores_generators(self, ctx_2_2_2):
        a = canonicalize(ctx_2_2_2, [ctx_2_2_2.point('1/4', 0)])
        b = canonicalize(ctx_2_2_2, [ctx_2_2_2.point('3/4', 0), ctx_2_2_2.point('1/2', 0)])
        assert a == b
        assert a.order == 4
        assert a.exponent() == 4
        assert a.contains(ctx_2_2_2.point('1/2', 0))
        assert not a.contains(ctx_2_2_2.point(0, '1/2'))

    def test_canonicalize_rejects_other_contexts(self, ctx_2_2_1, ctx_2_2_2):
        with pytest.raises(ValueError):
            canonicalize(ctx_2_2_1, [ctx_2_2_2.point('1/2', 0)])

    def test_dict_round_trip(self, ctx_2_2_2):
        H = canonicalize(ctx_2_2_2, [ctx_2_2_2.point('1/4', '1/2')])
        assert FiniteSubgroup.from_dict(H.to_dict()) == H

    @pytest.mark.parametrize(
        'basis, order_exp',
        [
            ([[1, 0], [1, 1]], None),
            ([[8, 0], [0, 1]], None),
            ([[2, 0], [0, 1]], 2),
        ]
    )
    def test_from_dict_rejects_invalid_data(self, basis, order_exp):
        d = {'p': 2, 'n': 2, 'level': 2, 'basis': basis}
        if order_exp is not None:
            d['order_exp'] = order_exp
        with pytest.raises(ValueError):
            FiniteSubgroup.from_dict(d)


class TestAnnihilator:

    def test_determinant_is_order(self):
        ctx = Context(2, 2, 2)
        for k in range(5):
            for H in enumerate_subgroups(ctx, k):
                assert annihilator_basis(H).det == H.order

    def test_inverse_construction(self):
        ctx = Context(3, 2, 2)
        for k in range(5):
            for H in enumerate_subgroups(ctx, k):
                assert subgroup_from_annihilator(ctx, annihilator_basis(H)) == H

    def test_examples(self, ctx_2_2_1):
        H = canonicalize(ctx_2_2_1, [ctx_2_2_1.point(0, '1/2')])
        assert annihilator_basis(H).mat == ((1, 0), (0, 2))
        assert annihilator_basis(trivial_subgroup(ctx_2_2_1)).mat == ((1, 0), (0, 1))
        assert annihilator_basis(full_torsion(ctx_2_2_1, 1)).mat == ((2, 0), (0, 2))

    def test_dual_beyond_level(self, ctx_2_2_1):
        with pytest.raises(PrecisionError):
            subgroup_from_annihilator(ctx_2_2_1, LatticeBasis(((4, 0), (0, 1))))


class TestImagesAndPreimages:

    def test_scalar_image(self, ctx_2_2_2):
        assert subgroup_image(((2, 0), (0, 2)), full_torsion(ctx_2_2_2, 2)) == full_torsion(ctx_2_2_2, 1)

    def test_scalar_preimage(self, ctx_2_2_2):
        assert subgroup_preimage(((2, 0), (0, 2)), trivial_subgroup(ctx_2_2_2)) == full_torsion(ctx_2_2_2, 1)
        assert subgroup_preimage(((2, 0), (0, 2)), full_torsion(ctx_2_2_2, 1)) == full_torsion(ctx_2_2_2, 2)

    def test_preimage_escaping_the_level(self, ctx_2_2_2):
        with pytest.raises(PrecisionError):
            subgroup_preimage(((2, 0), (0, 2)), full_torsion(ctx_2_2_2, 2))

    def test_singular_preimage(self, ctx_2_2_2):
        with pytest.raises(ValueError):
            subgroup_preimage(((1, 0), (0, 0)), trivial_subgroup(ctx_2_2_2))

    def test_image_of_preimage(self):
        ctx = Context(2, 2, 3)
        a = ((0, 2), (1, 0))
        for H in enumerate_subgroups(ctx, 2):
            T = subgroup_preimage(a, H)
            assert T.order_exp == H.order_exp + 1
            assert subgroup_image(a, T).is_subgroup_of(H)
