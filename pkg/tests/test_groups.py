"""Finite group constructors, conjugacy machinery, abelianization, specs."""

from __future__ import annotations

import pytest

from dtorsion.errors import GroupSpecError, GroupValidationError
from dtorsion.groups import (
    FiniteGroup,
    abelianization,
    alternating,
    centralizer,
    commuting_pairs,
    conjugacy_classes,
    cyclic,
    dihedral,
    direct_product,
    exponent,
    from_permutations,
    from_table,
    parse_group_spec,
    quaternion,
    symmetric,
)

Z1 = cyclic(1)
Z6 = cyclic(6)
V4 = direct_product(cyclic(2), cyclic(2))
S3 = symmetric(3)
S4 = symmetric(4)
A4 = alternating(4)
D4 = dihedral(4)
Q8 = quaternion()

ALL = [Z1, Z6, V4, S3, S4, A4, D4, Q8]


def test_orders():
    assert [len(g) for g in ALL] == [1, 6, 4, 6, 24, 12, 8, 8]


def test_group_axioms_brute_force():
    for g in ALL:
        n = len(g)
        e = g.identity
        for a in range(n):
            assert g.mul(e, a) == a == g.mul(a, e)
            assert g.mul(a, g.inv(a)) == e
            assert g.mul(g.inv(a), a) == e
        # associativity on a sample (the constructor validates fully)
        for a in range(min(n, 5)):
            for b in range(n):
                for c in range(n):
                    assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))


def test_element_order_and_exponent():
    assert [Z6.element_order(g) for g in Z6.elements()] == [1, 6, 3, 2, 3, 6]
    assert exponent(Z6) == 6
    assert exponent(V4) == 2
    assert exponent(S3) == 6
    assert exponent(S4) == 12
    assert exponent(Q8) == 4
    assert exponent(A4) == 6


def test_power_matches_repeated_multiplication():
    for g in (S3, Q8, Z6):
        for a in g.elements():
            acc = g.identity
            for k in range(0, 7):
                assert g.power(a, k) == acc
                acc = g.mul(acc, a)
            assert g.power(a, -3) == g.inv(g.power(a, 3))


def test_conjugacy_class_counts():
    # textbook values
    for g, want in [
        (Z6, 6),
        (V4, 4),
        (S3, 3),
        (S4, 5),
        (A4, 4),
        (D4, 5),
        (Q8, 5),
    ]:
        assert len(conjugacy_classes(g)) == want


def test_conjugacy_classes_partition_and_closure():
    for g in (S3, S4, D4, Q8):
        data = conjugacy_classes(g)
        seen = sorted(x for cls in data.classes for x in cls)
        assert seen == list(g.elements())
        for cls in data.classes:
            members = set(cls)
            base = cls[0]
            # orbit under conjugation equals the stored class
            orbit = {g.conjugate(k, base) for k in g.elements()}
            assert orbit == members
        for x in g.elements():
            assert x in data.classes[data.class_index[x]]


def test_centralizer_brute_force():
    for g in (S3, D4, Q8, S4):
        for a in g.elements():
            want = tuple(b for b in g.elements() if g.commutes(a, b))
            assert centralizer(g, a) == want
            # |class| * |centralizer| = |G|
            data = conjugacy_classes(g)
            cls = data.classes[data.class_index[a]]
            assert len(cls) * len(want) == len(g)


def test_commuting_pairs_count_is_sum_of_centralizers():
    for g in (S3, D4, Q8, A4):
        pairs = commuting_pairs(g)
        assert len(pairs) == sum(len(centralizer(g, a)) for a in g.elements())
        assert all(g.commutes(a, b) for a, b in pairs)
        # number of commuting pairs = (number of classes) * |G|
        assert len(pairs) == len(conjugacy_classes(g)) * len(g)


def test_abelianization_factors():
    assert abelianization(S3).invariant_factors == (2,)
    assert abelianization(S4).invariant_factors == (2,)
    assert abelianization(A4).invariant_factors == (3,)
    assert abelianization(Q8).invariant_factors == (2, 2)
    assert abelianization(D4).invariant_factors == (2, 2)
    assert abelianization(V4).invariant_factors == (2, 2)
    assert abelianization(Z6).invariant_factors == (6,)
    assert abelianization(Z1).invariant_factors == ()


def test_abelianization_projection_is_homomorphism():
    for g in (S3, S4, Q8, D4, Z6):
        ab = abelianization(g)
        facs = ab.invariant_factors
        proj = ab.projection
        for a in g.elements():
            for b in g.elements():
                prod = proj[g.mul(a, b)]
                want = tuple(
                    (x + y) % f for x, y, f in zip(proj[a], proj[b], facs)
                )
                assert prod == want
        assert proj[g.identity] == tuple(0 for _ in facs)


def test_direct_product_indexing():
    g = direct_product(cyclic(3), cyclic(4))
    # index a*|B| + b
    for a in range(3):
        for b in range(4):
            x = a * 4 + b
            y = 1 * 4 + 2  # (1, 2)
            prod = g.mul(x, y)
            assert prod == ((a + 1) % 3) * 4 + (b + 2) % 4


def test_quaternion_relations():
    # elements 0..7 = 1, -1, i, -i, j, -j, k, -k
    q = Q8
    minus = 1
    i, j, k = 2, 4, 6
    assert q.mul(i, i) == minus
    assert q.mul(j, j) == minus
    assert q.mul(k, k) == minus
    assert q.mul(i, j) == k
    assert q.mul(j, i) == q.mul(minus, k)
    assert q.element_order(minus) == 2


def test_dihedral_relations():
    d = dihedral(4)
    # rotations 0..3, reflections 4..7; r*s has order 2
    r, s = 1, 4
    assert d.element_order(r) == 4
    assert d.element_order(s) == 2
    rs = d.mul(r, s)
    assert d.element_order(rs) == 2
    assert d.mul(s, d.mul(r, s)) == d.inv(r)


def test_alternating_has_no_order_two_quotient():
    # A4 is the classic: index-2 subgroups would show up as a Z2 factor
    # in the abelianization, and there is none
    assert 2 not in abelianization(A4).invariant_factors
    assert len(A4) == 12 and len(S4) == 24


def test_generated_subgroup():
    g = S4
    # a transposition and a 4-cycle generate everything
    full = g.generated_subgroup([1, 2])
    sub = g.generated_subgroup([g.identity])
    assert sub == (g.identity,)
    trivial = g.generated_subgroup([])
    assert trivial == (g.identity,)


def test_parse_group_spec_atoms_and_products():
    assert len(parse_group_spec("Z6")) == 6
    assert len(parse_group_spec("Z2xZ2")) == 4
    assert len(parse_group_spec("S3")) == 6
    assert len(parse_group_spec("A4")) == 12
    assert len(parse_group_spec("D4")) == 8
    assert len(parse_group_spec("Q8")) == 8
    assert len(parse_group_spec("Z2xZ2xZ2")) == 8
    big = parse_group_spec("Z2xS3")
    assert len(big) == 12
    assert not big.is_abelian


def test_parse_group_spec_perm_and_table():
    g = parse_group_spec("perm 3 (1 2) (1 2 3)")
    assert len(g) == 6
    assert not g.is_abelian
    z3 = cyclic(3)
    flat = " ".join(str(z3.table[a][b]) for a in range(3) for b in range(3))
    h = parse_group_spec(f"table 3 {flat}")
    assert len(h) == 3
    assert h.is_abelian


def test_parse_group_spec_rejects_garbage():
    for bad in ("", "Zx", "K5", "perm 3", "table 2 0 1 1", "perm x (1 2)"):
        with pytest.raises(GroupSpecError):
            parse_group_spec(bad)


def test_from_table_validates():
    # not a latin square / no identity
    with pytest.raises(GroupValidationError):
        from_table([0, 0, 0, 0], 2)
    # wrong length is a spec problem, not a table problem
    with pytest.raises(GroupSpecError):
        from_table([0, 1, 1], 2)
    # non-associative latin square with identity:
    # order-5 loop (smallest non-associative case)
    loop = [
        0, 1, 2, 3, 4,
        1, 0, 3, 4, 2,
        2, 4, 0, 1, 3,
        3, 2, 4, 0, 1,
        4, 3, 1, 2, 0,
    ]
    with pytest.raises(GroupValidationError):
        from_table(loop, 5)


def test_from_permutations_validation():
    with pytest.raises(GroupSpecError):
        from_permutations(3, [(0, 0, 1)], name="bad")
    g = from_permutations(3, [(1, 0, 2)], name="swap")
    assert len(g) == 2


def test_is_abelian_flag():
    assert Z6.is_abelian
    assert V4.is_abelian
    assert not S3.is_abelian
    assert not Q8.is_abelian


def test_names_are_stable():
    assert cyclic(4).name == "Z4"
    assert direct_product(cyclic(2), cyclic(3)).name == "Z2xZ3"
    assert symmetric(3).name == "S3"
    assert quaternion().name == "Q8"
