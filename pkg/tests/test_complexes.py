"""Equivariant cell complexes, fixed loci, quotients, stringy Euler numbers.

The randomized generator below builds admissible actions by construction:
every stratum is a disjoint union of coset orbits G/K whose base cell has
a K-fixed boundary, so stabilizers fix closures automatically. Feeding
these to the two Euler formulas cross-validates them on inputs neither
was written against.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from dtorsion.complexes import (
    GComplex,
    Subcomplex,
    cell_counts,
    circle_with_involution,
    circle_with_rotation,
    euler_char,
    fixed_subcomplex,
    format_complex,
    inertia_components,
    orbifold_euler_conjugacy,
    orbifold_euler_sum,
    parse_complex,
    product_complex,
    quotient_orbit_euler,
    sphere_octahedral,
    torus_power,
)
from dtorsion.errors import FormatError, InadmissibleActionError, ShapeError
from dtorsion.groups import cyclic, direct_product, symmetric

Z2 = cyclic(2)
Z3 = cyclic(3)
V4 = direct_product(cyclic(2), cyclic(2))
S3 = symmetric(3)


# -- randomized admissible complexes ----------------------------------------


def _random_subgroup(group, rng):
    k = int(rng.integers(0, 3))
    seed = [int(x) for x in rng.integers(0, len(group), size=k)]
    return group.generated_subgroup(seed)


def _cosets(group, members):
    seen = set()
    out = []
    for g in group.elements():
        if g in seen:
            continue
        coset = tuple(sorted(group.mul(g, k) for k in members))
        seen |= set(coset)
        out.append(coset)
    return out


def random_admissible_complex(group, rng):
    """Random G-complex from coset orbits; valid by construction."""
    cells = []  # (id, dim, list of boundary ids)
    act = {g: {} for g in group.elements()}  # id -> image id, per element
    by_dim = {0: []}

    def add_orbit(dim, stratum, base_boundary, K):
        cosets = _cosets(group, K)
        rep = {c: c[0] for c in cosets}
        coset_of = {}
        for c in cosets:
            for x in c:
                coset_of[x] = c
        names = {c: f"c{dim}s{stratum}o{i}" for i, c in enumerate(cosets)}
        for c in cosets:
            x = rep[c]
            bnd = [act[x][b] for b in base_boundary]
            cells.append((names[c], dim, bnd))
            by_dim.setdefault(dim, []).append(names[c])
        for g in group.elements():
            for c in cosets:
                img = coset_of[group.mul(g, rep[c])]
                act[g][names[c]] = names[img]

    # vertices: 1..3 coset strata
    for s in range(int(rng.integers(1, 4))):
        add_orbit(0, s, [], _random_subgroup(group, rng))
    # higher cells: orbits whose base boundary is K-fixed, nonempty
    for dim in (1, 2):
        for s in range(int(rng.integers(0, 4 - dim))):
            K = _random_subgroup(group, rng)
            fixed_below = [
                cid
                for cid in by_dim.get(dim - 1, [])
                if all(act[k][cid] == cid for k in K)
            ]
            if not fixed_below:
                continue
            take = int(rng.integers(1, min(3, len(fixed_below)) + 1))
            picks = rng.choice(len(fixed_below), size=take, replace=False)
            base = [fixed_below[int(i)] for i in picks]
            add_orbit(dim, s, base, K)

    order = [cid for cid, _, _ in cells]
    action = {
        g: [act[g][cid] for cid in order]
        for g in group.elements()
        if g != group.identity
    }
    return GComplex(group, cells, action)


@pytest.mark.parametrize("group", [Z2, Z3, V4, S3], ids=lambda g: g.name)
def test_randomized_euler_formulas_agree(group):
    rng = np.random.default_rng(len(group) * 101)
    for _ in range(8):
        x = random_admissible_complex(group, rng)
        total = orbifold_euler_sum(x)
        assert total.denominator == 1
        assert orbifold_euler_conjugacy(x) == total
        assert inertia_components(x).total == total


def test_randomized_free_actions_divide():
    # when the action is free, only the identity pair contributes
    rng = np.random.default_rng(7)
    for group in (Z2, Z3, S3):
        for _ in range(6):
            x = random_admissible_complex(group, rng)
            free = all(
                int(x.action[g][c]) != c
                for g in group.elements()
                if g != group.identity
                for c in range(x.ncells)
            )
            if free:
                assert orbifold_euler_sum(x) == Fraction(euler_char(x), len(group))


# -- builders ----------------------------------------------------------------


def test_circle_with_involution():
    x = circle_with_involution()
    assert cell_counts(x) == (2, 2)
    assert euler_char(x) == 0
    fixed = fixed_subcomplex(x, (1,))
    assert euler_char(fixed) == 2  # two fixed vertices, edges swapped
    assert orbifold_euler_sum(x) == 3
    report = inertia_components(x)
    assert report.total == 3
    assert [c.euler_quotient for c in report.components] == [1, 2]


def test_circle_with_rotation_is_free():
    x = circle_with_rotation()
    assert euler_char(x) == 0
    assert euler_char(fixed_subcomplex(x, (1,))) == 0
    assert orbifold_euler_sum(x) == 0


def test_sphere_octahedral_geometry():
    x = sphere_octahedral()
    assert cell_counts(x) == (6, 12, 8)
    assert euler_char(x) == 2
    # pole half-turn fixes the two poles
    assert euler_char(fixed_subcomplex(x, (1,))) == 2
    # equatorial reflection fixes the equator circle
    eq = fixed_subcomplex(x, (2,))
    assert cell_counts(eq) == (4, 4)
    assert euler_char(eq) == 0
    # the antipodal map is free
    assert euler_char(fixed_subcomplex(x, (3,))) == 0


def test_sphere_octahedral_orbifold_euler():
    x = sphere_octahedral()
    assert orbifold_euler_sum(x) == 2
    assert orbifold_euler_conjugacy(x) == 2
    # restricting to the antipodal Z2 gives the projective plane: e = 1
    assert quotient_orbit_euler(x, (0, 3)) == 1
    assert orbifold_euler_sum(x, (0, 3)) == 1


def test_torus_power_kummer_count():
    x = torus_power(4)
    assert euler_char(x) == 0
    assert orbifold_euler_sum(x) == 24
    report = inertia_components(x)
    assert report.total == 24
    assert [c.euler_quotient for c in report.components] == [8, 16]
    # the sixteen half-period points are the fixed locus
    assert euler_char(fixed_subcomplex(x, (1,))) == 16


def test_torus_squared_orbifold_euler():
    # four fixed points on T^2: (0 + 4 + 4 + 4) / 2 = 6
    x = torus_power(2)
    assert cell_counts(x) == (4, 8, 4)
    assert euler_char(x) == 0
    assert euler_char(fixed_subcomplex(x, (1,))) == 4
    assert orbifold_euler_sum(x) == 6


def test_product_complex_structure():
    c = circle_with_involution()
    t2 = product_complex(c, c)
    assert cell_counts(t2) == cell_counts(torus_power(2))
    assert euler_char(t2) == euler_char(c) * euler_char(c)
    # fixed loci multiply under the diagonal action
    assert euler_char(fixed_subcomplex(t2, (1,))) == euler_char(
        fixed_subcomplex(c, (1,))
    ) ** 2


def test_product_requires_same_group_object():
    a = circle_with_involution()
    b = circle_with_involution()  # different Z2 instance
    with pytest.raises(ShapeError):
        product_complex(a, b)
    assert product_complex(a, circle_with_rotation(a.group)).ncells == 16


def test_fixed_subcomplex_intersects():
    x = sphere_octahedral()
    both = fixed_subcomplex(x, (1, 2))
    # poles meet the equator nowhere
    assert euler_char(both) == 0
    assert cell_counts(both) == ()
    sub = fixed_subcomplex(x, (x.group.identity,))
    assert euler_char(sub) == 2


def test_quotient_orbit_euler_rejects_unstable_subcomplex():
    x = circle_with_rotation()
    one_vertex = Subcomplex(x, [0])
    with pytest.raises(InadmissibleActionError):
        quotient_orbit_euler(one_vertex)


def test_quotient_of_free_circle():
    x = circle_with_rotation()
    assert quotient_orbit_euler(x) == 0  # circle again


# -- validation ---------------------------------------------------------------


def test_rejects_swapped_boundary_of_fixed_edge():
    # edge fixed, endpoints swapped: the classic inadmissible reflection
    cells = [("a", 0, []), ("b", 0, []), ("e", 1, ["a", "b"])]
    with pytest.raises(InadmissibleActionError):
        GComplex(Z2, cells, {1: ["b", "a", "e"]})


def test_rejects_non_permutation_action():
    cells = [("a", 0, []), ("b", 0, [])]
    with pytest.raises(ShapeError):
        GComplex(Z2, cells, {1: ["a", "a"]})


def test_rejects_boundary_not_dropping_dimension():
    with pytest.raises(ShapeError):
        GComplex(Z2, [("a", 0, []), ("e", 1, ["a"]), ("f", 1, ["e"])])


def test_rejects_unknown_boundary():
    with pytest.raises(ShapeError):
        GComplex(Z2, [("e", 1, ["ghost"])])


def test_rejects_group_law_violation():
    # order-2 "action" of an element of order 3
    cells = [("a", 0, []), ("b", 0, []), ("c", 0, [])]
    with pytest.raises(ShapeError):
        GComplex(Z3, cells, {1: ["b", "a", "c"], 2: ["a", "b", "c"]})


def test_rejects_dimension_crossing():
    cells = [("a", 0, []), ("e", 1, [])]
    with pytest.raises(ShapeError):
        GComplex(Z2, cells, {1: ["e", "a"]})


def test_identity_row_optional_but_trivial():
    cells = [("a", 0, []), ("b", 0, [])]
    x = GComplex(Z2, cells, {0: ["a", "b"], 1: ["b", "a"]})
    assert x.ncells == 2
    with pytest.raises(ShapeError):
        GComplex(Z2, cells, {0: ["b", "a"]})


# -- file format ---------------------------------------------------------------


def test_format_parse_round_trip():
    for x in (sphere_octahedral(), torus_power(2), circle_with_rotation()):
        text = format_complex(x)
        back = parse_complex(text, x.group)
        assert back.ids == x.ids
        assert back.dims == x.dims
        assert back.boundaries == x.boundaries
        assert np.array_equal(back.action, x.action)
        assert format_complex(back) == text


def test_parse_rejects_malformed():
    for bad in (
        "cell a\n",  # missing dimension
        "cell a zero\n",
        "cell a 0\ncell a 0\n",  # duplicate
        "bnd a b\n",  # bnd before cell
        "cell a 0\nact x a\n",
        "wobble a 0\n",
    ):
        with pytest.raises(FormatError):
            parse_complex(bad, Z2)


def test_parse_comments_and_blanks():
    text = "# a point pair\ncell a 0\n\ncell b 0  # trailing\nact 1 b a\n"
    x = parse_complex(text, Z2)
    assert x.ncells == 2
