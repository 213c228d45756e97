"""Projective representations with exact monomial matrices.

The V4 Pauli assignment is the hand oracle: gamma(a) = Z, gamma(b) = X,
gamma(ab) = -iXZ satisfies gamma(g)gamma(h) = (-1)^(a_g b_h) gamma(gh),
so it realizes the explicit bilinear cocycle of test_torsion directly.
"""

from __future__ import annotations

import numpy as np
import pytest

from dtorsion.cochains import CochainSpace, coboundary
from dtorsion.cohomology import enumerate_class_representatives
from dtorsion.errors import DegreeError, NotCocycleError, ShapeError
from dtorsion.groups import (
    conjugacy_classes,
    cyclic,
    dihedral,
    direct_product,
    quaternion,
    symmetric,
)
from dtorsion.phases import MINUS_ONE, ONE, CyclotomicSum, Phase
from dtorsion.projrep import (
    MonomialMatrix,
    MonomialRep,
    irrep_dimensions,
    is_omega_regular,
    omega_regular_classes,
    twisted_regular_rep,
    twisted_rep_report,
    verify_projective_relation,
)

V4 = direct_product(cyclic(2), cyclic(2))
S3 = symmetric(3)
D4 = dihedral(4)
Q8 = quaternion()
Z2Z4 = direct_product(cyclic(2), cyclic(4))

SMALL = [cyclic(n) for n in range(1, 9)] + [
    V4,
    Z2Z4,
    direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2)),
    D4,
    Q8,
    S3,
]


def explicit_v4_cocycle():
    # w(g, h) = 2 a(g) b(h) mod 4, g = 2a + b; same table as test_torsion
    space = CochainSpace(V4, 2, 4)
    vec = np.zeros(space.slots, dtype=np.int64)
    for g in range(1, 4):
        for h in range(1, 4):
            vec[space.index_of((g, h))] = (2 * (g >> 1) * (h & 1)) % 4
    return space.from_vector(vec)


# -- monomial matrix algebra ---------------------------------------------------


def test_monomial_matrix_multiplication():
    X = MonomialMatrix((1, 0), (ONE, ONE))
    Z = MonomialMatrix((0, 1), (ONE, MINUS_ONE))
    XZ = X @ Z
    ZX = Z @ X
    assert XZ == ZX.scaled(MINUS_ONE)  # anticommute
    assert X @ X == MonomialMatrix.identity(2)
    assert Z @ Z == MonomialMatrix.identity(2)


def test_monomial_matrix_trace():
    Z = MonomialMatrix((0, 1), (ONE, MINUS_ONE))
    assert Z.trace() == CyclotomicSum.zero()
    I2 = MonomialMatrix.identity(2)
    assert I2.trace() == 2
    X = MonomialMatrix((1, 0), (ONE, ONE))
    assert X.trace() == 0


def test_monomial_matrix_to_complex_consistent():
    X = MonomialMatrix((1, 0), (ONE, ONE))
    Z = MonomialMatrix((0, 1), (ONE, MINUS_ONE))
    got = (X @ Z).to_complex()
    want = X.to_complex() @ Z.to_complex()
    assert np.allclose(got, want)


def test_monomial_matrix_triples_sorted():
    m = MonomialMatrix((2, 0, 1), (ONE, MINUS_ONE, Phase(1, 4)))
    triples = m.triples()
    assert triples == sorted(triples)
    assert len(triples) == 3


def test_monomial_matrix_rejects_non_permutation():
    with pytest.raises(ShapeError):
        MonomialMatrix((0, 0), (ONE, ONE))
    with pytest.raises(ShapeError):
        MonomialMatrix((0, 1), (ONE,))


# -- the V4 Pauli oracle -------------------------------------------------------


def test_pauli_assignment_satisfies_relation():
    om = explicit_v4_cocycle()
    X = MonomialMatrix((1, 0), (ONE, ONE))
    Z = MonomialMatrix((0, 1), (ONE, MINUS_ONE))
    gamma = {
        0: MonomialMatrix.identity(2),
        1: X,  # b = (0, 1)
        2: Z,  # a = (1, 0)
        3: (Z @ X).scaled(Phase(1, 2)),  # ab, scaled to fix the sign
    }
    # direct check of gamma(g) gamma(h) = omega(g, h) gamma(gh)
    report = verify_projective_relation(gamma, om)
    assert report.passed, str(report)


def test_pauli_assignment_fails_against_wrong_class():
    om = CochainSpace(V4, 2, 4).zero()
    X = MonomialMatrix((1, 0), (ONE, ONE))
    Z = MonomialMatrix((0, 1), (ONE, MINUS_ONE))
    gamma = {
        0: MonomialMatrix.identity(2),
        1: X,
        2: Z,
        3: (Z @ X).scaled(Phase(1, 2)),
    }
    report = verify_projective_relation(gamma, om)
    assert not report.passed
    assert report.violations


# -- twisted regular representation --------------------------------------------


def test_twisted_regular_rep_relation_everywhere():
    for group in SMALL:
        for om in enumerate_class_representatives(group, 2):
            rep = twisted_regular_rep(group, om)
            assert verify_projective_relation(rep, om).passed


def test_twisted_regular_rep_of_trivial_cocycle_is_regular():
    om = CochainSpace(S3, 2, 6).zero()
    rep = twisted_regular_rep(S3, om)
    # permutation matrices with no phases
    for g in S3.elements():
        for _, _, p in rep[g].triples():
            assert p.is_one
    assert rep.dimension == 6


def test_twisted_regular_rep_rejects_non_cocycle():
    space = CochainSpace(V4, 2, 4)
    vec = np.zeros(space.slots, dtype=np.int64)
    vec[space.index_of((1, 2))] = 1
    with pytest.raises(NotCocycleError):
        twisted_regular_rep(V4, space.from_vector(vec))


def test_twisted_regular_rep_group_mismatch():
    om = CochainSpace(V4, 2, 4).zero()
    with pytest.raises(ShapeError):
        twisted_regular_rep(S3, om)


# -- regular classes and dimensions ---------------------------------------------


def test_v4_nontrivial_class_collapses_to_identity():
    om = enumerate_class_representatives(V4, 2)[1]
    regular = omega_regular_classes(V4, om)
    assert regular == [(0,)]
    assert is_omega_regular(om, 0)
    for g in (1, 2, 3):
        assert not is_omega_regular(om, g)
    assert irrep_dimensions(V4, om) == (2,)


def test_v4_twisted_trace_vanishes_off_identity():
    om = enumerate_class_representatives(V4, 2)[1]
    rep = twisted_regular_rep(V4, om)
    assert rep[0].trace() == 4
    for g in (1, 2, 3):
        assert rep[g].trace() == 0


def test_ordinary_dimensions_frozen():
    # trivial cocycle: ordinary character theory values
    cases = [
        (V4, (1, 1, 1, 1)),
        (S3, (1, 1, 2)),
        (Q8, (1, 1, 1, 1, 2)),
        (D4, (1, 1, 1, 1, 2)),
        (cyclic(6), (1, 1, 1, 1, 1, 1)),
    ]
    for group, want in cases:
        om = CochainSpace(group, 2, len(group)).zero()
        assert irrep_dimensions(group, om) == want


def test_twisted_dimensions_frozen():
    # nontrivial classes collapse the algebra to matrix blocks
    om_d4 = enumerate_class_representatives(D4, 2)[1]
    assert irrep_dimensions(D4, om_d4) == (2, 2)
    om_z2z4 = enumerate_class_representatives(Z2Z4, 2)[1]
    assert irrep_dimensions(Z2Z4, om_z2z4) == (2, 2)


def test_identities_hold_across_small_corpus():
    for group in SMALL:
        classes = conjugacy_classes(group)
        for om in enumerate_class_representatives(group, 2):
            regular = omega_regular_classes(group, om)
            dims = irrep_dimensions(group, om)
            assert sum(d * d for d in dims) == len(group)
            assert len(dims) == len(regular)
            assert len(regular) <= len(classes.classes)
            # identity class is always regular
            assert (group.identity,) in [
                tuple(sorted(c)) for c in regular
            ] or group.identity in [c[0] for c in regular]


def test_dimensions_stable_under_coboundary_shift():
    rng = np.random.default_rng(17)
    for group in (V4, D4):
        om = enumerate_class_representatives(group, 2)[1]
        base_dims = irrep_dimensions(group, om)
        base_classes = omega_regular_classes(group, om)
        prev = CochainSpace(group, 1, len(group))
        for _ in range(5):
            f = prev.from_vector(rng.integers(0, len(group), size=prev.slots))
            shifted = om + coboundary(f)
            assert irrep_dimensions(group, shifted) == base_dims
            assert omega_regular_classes(group, shifted) == base_classes


def test_report_bundle():
    om = enumerate_class_representatives(V4, 2)[1]
    report = twisted_rep_report(V4, om, class_id="1")
    assert report.class_id == "1"
    assert report.regular_class_count == 1
    assert report.dimensions == (2,)
    assert report.relation_passed
    assert report.squares_sum_to_order
    assert report.count_matches_classes


def test_irrep_dimensions_ceiling():
    big = direct_product(symmetric(4), cyclic(2))  # order 48
    om = CochainSpace(big, 2, 48).zero()
    with pytest.raises(ShapeError):
        irrep_dimensions(big, om)


def test_monomial_rep_indexing():
    om = CochainSpace(V4, 2, 4).zero()
    rep = twisted_regular_rep(V4, om)
    assert isinstance(rep, MonomialRep)
    assert rep.dimension == 4
    assert rep[0] == MonomialMatrix.identity(4)
