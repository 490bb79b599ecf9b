import pytest

from tpo.classfn import (
    ClassFunction,
    adams,
    aut_act,
    aut_average,
    constant_function,
    delta_function,
    external_product,
    is_aut_invariant,
    load_class_function,
    power_mod_ideal,
    power_mod_transfer,
    power_op,
    random_class_function,
    restrict,
    save_class_function,
    transfer,
    twist,
    unit_generators,
    unit_group,
    zero_function,
)
from tpo.classify import LevelDatum
from tpo.coeffs import CoeffValue
from tpo.exceptions import (
    CapExceededError,
    MissingEntryError,
    SectionError,
)
from tpo.groups import (
    direct_product,
    identity_hom,
    inclusion,
    subgroup,
    wreath_product,
)
from tpo.isogeny import (
    Isogeny,
    build_power_section,
)
from tpo.padic import (
    Context,
    canonicalize,
    trivial_subgroup,
)


ONE, FLIP = (0, 1), (1, 0)


def t(*v):
    return CoeffValue.variable(v)


class TestClassFunction:

    def test_entries_must_be_canonical(self, ctx_2_1_1, s3):
        with pytest.raises(ValueError):
            ClassFunction(ctx_2_1_1, s3, {((2, 1, 0),): 1})

    def test_missing_entries(self, ctx_2_1_1, c2):
        f = ClassFunction(ctx_2_1_1, c2, {(ONE,): 1})
        assert not f.is_total()
        assert f((ONE,)) == 1
        with pytest.raises(MissingEntryError):
            f((FLIP,))
        with pytest.raises(KeyError):
            f[(FLIP,)]

    def test_value_at_a_foreign_tuple(self, ctx_2_1_1, c2):
        with pytest.raises(ValueError):
            constant_function(ctx_2_1_1, c2)(((0, 2, 1),))

    def test_lookup_by_any_class_member(self, ctx_2_1_1, s3):
        f = delta_function(ctx_2_1_1, s3, ((2, 1, 0),))
        assert f(((1, 0, 2),)) == t(1)
        assert f(((0, 1, 2),)) == 0

    def test_pointwise_operations(self, ctx_2_1_1, c2):
        f = delta_function(ctx_2_1_1, c2, (FLIP,))
        g = constant_function(ctx_2_1_1, c2, 2)
        assert (f + g)((FLIP,)) == t(1) + 2
        assert (f * g)((FLIP,)) == 2 * t(1)
        assert (f - f) == zero_function(ctx_2_1_1, c2)
        assert (3 * f)((FLIP,)) == 3 * t(1)
        assert -g == constant_function(ctx_2_1_1, c2, -2)

    def test_incompatible_functions(self, ctx_2_1_1, ctx_2_1_2, c2):
        with pytest.raises(ValueError):
            constant_function(ctx_2_1_1, c2) + constant_function(ctx_2_1_2, c2)

    def test_save_and_load(self, ctx_2_1_2, c2, rng, tmp_path):
        f = random_class_function(ctx_2_1_2, c2, rng)
        path = str(tmp_path / 'f.json')
        save_class_function(f, path)
        assert load_class_function(path) == f


class TestRestrictionAndTransfer:

    def test_transfer_from_the_trivial_subgroup(self, ctx_2_1_1, c2):
        K = subgroup(c2, [ONE])
        f = constant_function(ctx_2_1_1, K, 3)
        assert transfer(f, inclusion(K, c2)) == ClassFunction(ctx_2_1_1, c2, {(ONE,): 6, (FLIP,): 0})

    def test_transfer_along_the_identity(self, ctx_2_1_1, s3, rng):
        f = random_class_function(ctx_2_1_1, s3, rng)
        assert transfer(f, identity_hom(s3)) == f
        assert restrict(f, identity_hom(s3)) == f

    def test_restriction(self, ctx_2_1_1, s3):
        A = subgroup(s3, [(0, 1, 2), (1, 0, 2)])
        f = delta_function(ctx_2_1_1, s3, ((0, 2, 1),))
        assert restrict(f, inclusion(A, s3)) == ClassFunction(ctx_2_1_1, A, {((0, 1, 2),): 0, ((1, 0, 2),): t(1)})

    def test_transfer_of_a_function_on_another_group(self, ctx_2_1_1, c2, s3):
        with pytest.raises(ValueError):
            transfer(constant_function(ctx_2_1_1, c2), identity_hom(s3))


class TestTwists:

    def test_twist_by_the_identity(self, ctx_2_2_1, c2, rng):
        f = random_class_function(ctx_2_2_1, c2, rng)
        assert twist(f, Isogeny.identity(ctx_2_2_1)) == f

    def test_twist_domain(self, ctx_2_1_2, c2):
        g = twist(constant_function(ctx_2_1_2, c2), Isogeny.scalar(ctx_2_1_2, 2))
        assert g.domain == canonicalize(ctx_2_1_2, [ctx_2_1_2.point('1/2')])
        with pytest.raises(ValueError):
            twist(g, Isogeny.identity(ctx_2_1_2))

    def test_aut_act(self, ctx_2_1_2, c2):
        f = delta_function(ctx_2_1_2, c2, (FLIP,))
        assert aut_act(((3,),), f)((FLIP,)) == t(3)
        with pytest.raises(ValueError):
            aut_act(((2,),), f)


def test_external_product(ctx_2_1_1, c2):
    f = delta_function(ctx_2_1_1, c2, (FLIP,))
    g = constant_function(ctx_2_1_1, c2, 2)
    h = external_product(f, g)
    assert h.group == direct_product(c2, c2)
    assert h(((1, 0, 2, 3),)) == 2 * t(1)
    assert h(((0, 1, 3, 2),)) == 0


class TestPowerOperation:

    def test_first_power_is_the_identity(self, ctx_2_1_2, c2, section_2_1_2, rng):
        f = random_class_function(ctx_2_1_2, c2, rng)
        assert f == power_op(f, 1, section_2_1_2)

    def test_unit_and_multiplicativity(self, ctx_2_1_2, c2, section_2_1_2, rng):
        W = wreath_product(c2, 2)
        assert power_op(constant_function(ctx_2_1_2, c2), 2, section_2_1_2) == constant_function(ctx_2_1_2, W)
        f = random_class_function(ctx_2_1_2, c2, rng)
        g = random_class_function(ctx_2_1_2, c2, rng)
        lhs = power_op(f * g, 2, section_2_1_2).materialize()
        rhs = power_op(f, 2, section_2_1_2).materialize() * power_op(g, 2, section_2_1_2)
        assert lhs == rhs

    def test_diagonal_value(self, ctx_2_1_2, c2, section_2_1_2):
        f = delta_function(ctx_2_1_2, c2, (FLIP,))
        P = power_op(f, 2, section_2_1_2)
        assert P((P.group.diagonal(FLIP),)) == t(1) * t(1)
        assert P((P.group.diagonal(ONE),)) == 0

    def test_domain_and_section_errors(self, ctx_2_1_1, ctx_2_1_2, c2, section_2_1_2):
        g = twist(constant_function(ctx_2_1_2, c2), Isogeny.scalar(ctx_2_1_2, 2))
        with pytest.raises(ValueError):
            power_op(g, 2, section_2_1_2)
        with pytest.raises(SectionError):
            power_op(constant_function(ctx_2_1_1, c2), 2, section_2_1_2)

    def test_rank_2(self, ctx_2_2_2, c2, section_2_2_2, rng):
        W = wreath_product(c2, 2)
        assert power_op(constant_function(ctx_2_2_2, c2), 2, section_2_2_2) == constant_function(ctx_2_2_2, W)
        f = random_class_function(ctx_2_2_2, c2, rng)
        g = random_class_function(ctx_2_2_2, c2, rng)
        lhs = power_op(f * g, 2, section_2_2_2).materialize()
        assert lhs == power_op(f, 2, section_2_2_2).materialize() * power_op(g, 2, section_2_2_2)
        P = power_op(delta_function(ctx_2_2_2, c2, (FLIP, ONE)), 2, section_2_2_2)
        assert P((W.diagonal(FLIP), W.diagonal(ONE))) == t(1, 0) * t(1, 0)


class TestQuotients:

    def test_power_mod_transfer(self, ctx_2_1_1, c2):
        section = build_power_section(ctx_2_1_1, 1)
        H = canonicalize(ctx_2_1_1, [ctx_2_1_1.point('1/2')])
        sub = power_mod_transfer(delta_function(ctx_2_1_1, c2, (FLIP,)), 1, section)
        assert sub.m == 2
        assert sub.entries == {LevelDatum(H, (ONE,)): CoeffValue.zero(), LevelDatum(H, (FLIP,)): t(0)}
        with pytest.raises(MissingEntryError):
            sub[LevelDatum(trivial_subgroup(ctx_2_1_1), (ONE,))]
        assert len(sub.to_dict()['entries']) == 2

    def test_power_mod_ideal(self, ctx_2_1_1, c2):
        section = build_power_section(ctx_2_1_1, 1)
        H = canonicalize(ctx_2_1_1, [ctx_2_1_1.point('1/2')])
        components = power_mod_ideal(delta_function(ctx_2_1_1, c2, (ONE,)), 1, section)
        assert list(components) == [H]
        assert components[H] == constant_function(ctx_2_1_1, c2, t(0))

    def test_power_mod_ideal_checks_orders(self, ctx_2_1_1, c2):
        section = build_power_section(ctx_2_1_1, 1)
        with pytest.raises(ValueError):
            power_mod_ideal(constant_function(ctx_2_1_1, c2), 1, section, [trivial_subgroup(ctx_2_1_1)])


class TestAdams:

    def test_adams_zero_is_the_identity(self, ctx_2_1_2, c2, rng):
        f = random_class_function(ctx_2_1_2, c2, rng)
        assert adams(f, 0) == f

    def test_adams_composes(self, ctx_2_1_2, c2, rng):
        f = random_class_function(ctx_2_1_2, c2, rng)
        assert adams(adams(f, 1), 1) == adams(f, 2)

    def test_adams_example(self, ctx_2_1_2, c2):
        f = delta_function(ctx_2_1_2, c2, (ONE,), v=(1,))
        assert adams(f, 1) == constant_function(ctx_2_1_2, c2, t(2))


class TestAutomorphisms:

    @pytest.mark.parametrize('p, n, level, expected', [(2, 1, 2, 2), (2, 2, 1, 6), (3, 1, 1, 2), (3, 2, 1, 48)])
    def test_unit_group_order(self, p, n, level, expected):
        assert len(list(unit_group(Context(p, n, level)))) == expected

    def test_unit_group_cap(self):
        with pytest.raises(CapExceededError):
            list(unit_group(Context(2, 2, 2), cap=100))

    def test_unit_generators(self):
        assert unit_generators(Context(2, 1, 2)) == [((3,),)]
        assert len(unit_generators(Context(3, 2, 1))) == 3

    def test_average_is_invariant(self, ctx_2_1_2, c2):
        f = delta_function(ctx_2_1_2, c2, (FLIP,))
        assert not is_aut_invariant(f)
        avg = aut_average(f)
        assert is_aut_invariant(avg)
        assert avg((FLIP,)) == (t(1) + t(3)) / 2
        assert is_aut_invariant(constant_function(ctx_2_1_2, c2))
