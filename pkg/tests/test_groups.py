import pytest

from tpo.exceptions import (
    CapExceededError,
    GroupSpecError,
)
from tpo.groups import (
    FiniteGroup,
    abelian_subgroups,
    base_inclusion,
    block_juxtaposition,
    commuting_tuples,
    conjugacy_classes,
    cyclic_group,
    fixed_cosets,
    inclusion,
    invert,
    make_group,
    multiply,
    perm_cycles,
    perm_order,
    perm_power,
    product_splitting,
    required_level,
    subgroup,
    symmetric_group,
    wreath_decode,
    wreath_encode,
    wreath_nabla,
    wreath_product,
)


A3 = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


def test_permutation_arithmetic():
    g, h = (1, 2, 0), (1, 0, 2)
    assert multiply(g, h) == (2, 1, 0)
    assert invert(g) == (2, 0, 1)
    assert perm_order(g) == 3
    assert perm_power(g, -1) == invert(g)
    assert perm_power(g, 3) == (0, 1, 2)
    assert perm_cycles((1, 0, 3, 2)) == [(0, 1), (2, 3)]


class TestFiniteGroup:

    @pytest.mark.parametrize(
        'G, order',
        [
            (make_group('e'), 1),
            (cyclic_group(4), 4),
            (symmetric_group(3), 6),
            (symmetric_group(0), 1),
            (wreath_product(cyclic_group(2), 2), 8),
            (wreath_product(symmetric_group(3), 2), 72),
            (wreath_product(cyclic_group(2), 0), 1),
        ]
    )
    def test_orders(self, G, order):
        assert G.order == order
        assert len(G.elements) == order

    def test_invalid_generators(self):
        with pytest.raises(ValueError):
            FiniteGroup(3, [(0, 0, 1)])
        with pytest.raises(ValueError):
            cyclic_group(0)

    def test_equality_by_elements(self):
        assert make_group('S2') == cyclic_group(2)
        assert cyclic_group(3) != symmetric_group(3)

    def test_hash(self):
        assert hash(make_group('perm:3:(0 1 2)')) == hash(make_group('perm:3:(0 2 1)'))
        assert hash(make_group('S2')) == hash(cyclic_group(2))
        assert hash(make_group('perm:4:(0 1)')) != hash(make_group('perm:4:(2 3)'))
        assert make_group('perm:4:(0 1)').orbits == ((0, 1), (2,), (3,))

    def test_cap(self):
        G = FiniteGroup(5, [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], cap=100)
        assert G.order == 120
        with pytest.raises(CapExceededError):
            G.elements
        with pytest.raises(CapExceededError):
            wreath_product(symmetric_group(3), 3, cap=100)

    def test_p_elements(self, s3):
        assert len(s3.p_elements(2)) == 4
        assert len(s3.p_elements(3)) == 3
        assert s3.p_elements(5) == [(0, 1, 2)]


class TestMakeGroup:

    @pytest.mark.parametrize(
        'spec, order',
        [
            ('trivial', 1),
            ('C2xC3', 6),
            ('C2wrS2', 8),
            ('(C2xC2)wrS2', 32),
            ('C2wrS2wrS2', 128),
            ('perm:3:(0 1);(0 1 2)', 6),
            ('perm:4:(0 1)(2 3)', 2),
        ]
    )
    def test_orders(self, spec, order):
        assert make_group(spec).order == order

    @pytest.mark.parametrize('spec', ['Q8', '(C2', 'C2x', 'C2y', 'perm:3:(0 3)', 'perm:x'])
    def test_invalid_specs(self, spec):
        with pytest.raises(GroupSpecError):
            make_group(spec)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            make_group('S5', cap=100)


class TestCommutingTuples:

    @pytest.mark.parametrize(
        'spec, p, n, tuples, classes',
        [
            ('C2', 2, 1, 2, 2),
            ('C2', 2, 2, 4, 4),
            ('S2', 2, 2, 4, 4),
            ('S3', 2, 1, 4, 2),
            ('S3', 3, 1, 3, 2),
            ('C3', 2, 1, 1, 1),
            ('C2wrS2', 2, 1, 8, 5),
            ('C2wrS2', 2, 2, 40, 22),
        ]
    )
    def test_counts(self, spec, p, n, tuples, classes):
        G = make_group(spec)
        assert len(G.commuting_tuples(p, n)) == tuples
        table = G.class_table(p, n)
        assert len(table) == classes
        assert sum(table.sizes.values()) == tuples

    def test_tuples_commute(self, s3):
        for t in commuting_tuples(s3, 2, 2):
            assert multiply(t[0], t[1]) == multiply(t[1], t[0])

    def test_canonical_representatives(self, s3):
        table = s3.class_table(2, 1)
        assert table.representatives == (((0, 1, 2),), ((0, 2, 1),))
        assert table.canonical(((2, 1, 0),)) == ((0, 2, 1),)
        assert conjugacy_classes(s3, s3.commuting_tuples(3, 1)) == [(((0, 1, 2),), 1), (((1, 2, 0),), 2)]


def test_abelian_subgroups(s3):
    subgroups = abelian_subgroups(s3)
    assert [A.order for A in subgroups] == [1, 2, 2, 2, 3]
    assert all(A.is_abelian() for A in subgroups)


class TestSubgroups:

    def test_subgroup(self, s3):
        A = subgroup(s3, A3)
        assert A.order == 3
        assert inclusion(A, s3).is_homomorphism()
        assert inclusion(A, s3).is_injective()

    def test_not_closed(self, s3):
        with pytest.raises(ValueError):
            subgroup(s3, [(0, 1, 2), (1, 0, 2), (0, 2, 1)])

    def test_inclusion_needs_matching_points(self, c2, s3):
        with pytest.raises(ValueError):
            inclusion(c2, s3)

    @pytest.mark.parametrize(
        't, expected',
        [
            (((0, 1, 2),), [(0, 1, 2), (0, 2, 1)]),
            (((1, 2, 0),), [(0, 1, 2), (0, 2, 1)]),
            (((1, 0, 2),), []),
        ]
    )
    def test_fixed_cosets(self, s3, t, expected):
        j = inclusion(subgroup(s3, A3), s3)
        assert fixed_cosets(s3, j, t) == expected


class TestWreathProducts:

    def test_encode_and_decode(self):
        w = wreath_encode(2, [(1, 0), (0, 1)], (1, 0))
        assert w == (3, 2, 0, 1)
        assert wreath_decode(2, 2, w) == (((1, 0), (0, 1)), (1, 0))

    def test_element_accessors(self, c2):
        W = wreath_product(c2, 2)
        w = W.encode([(1, 0), (0, 1)], (1, 0))
        assert w in W
        assert W.block_perm(w) == (1, 0)
        assert W.component(w, 0) == (1, 0)
        assert W.diagonal((1, 0)) == (1, 0, 3, 2)
        assert W.element_from_dict(W.element_to_dict(w)) == w

    def test_structure_maps_are_homomorphisms(self, c2):
        W1, W2 = wreath_product(c2, 1), wreath_product(c2, 2)
        delta = block_juxtaposition(W1, W2)
        assert delta.target.order == 48
        assert delta.is_homomorphism() and delta.is_injective()
        assert base_inclusion(W2).is_homomorphism()
        nabla = wreath_nabla(W2, 2)
        assert nabla.source.order == 128
        assert nabla.is_homomorphism() and nabla.is_injective()

    def test_product_splitting(self):
        W = wreath_product(make_group('C2xC3'), 2)
        split = product_splitting(W)
        assert split.target.order == 144
        assert split.is_homomorphism() and split.is_injective()
        g = W.encode([(1, 0, 3, 4, 2), (0, 1, 2, 3, 4)], (1, 0))
        a, b = split.target.split(split(g))
        assert a == wreath_encode(2, [(1, 0), (0, 1)], (1, 0))
        assert b == wreath_encode(3, [(1, 2, 0), (0, 1, 2)], (1, 0))

    def test_product_splitting_needs_two_factors(self, c2):
        with pytest.raises(ValueError):
            product_splitting(wreath_product(c2, 2))


@pytest.mark.parametrize(
    'spec, p, m, expected',
    [
        ('C2', 2, 1, 1),
        ('C4', 2, 1, 2),
        ('C2', 2, 2, 2),
        ('C3', 2, 1, 1),
        ('S3', 3, 3, 2),
        ('e', 2, 4, 2),
    ]
)
def test_required_level(spec, p, m, expected):
    assert required_level(make_group(spec), p, m) == expected
