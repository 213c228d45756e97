"""Normalized cochain tables and the bar differential.

Key structural facts exercised here: d(d(f)) = 0, the matrix form of the
differential agrees with the direct formula, and the text format round
trips.
"""

from __future__ import annotations

import numpy as np
import pytest

from dtorsion.cochains import (
    Cochain,
    CochainSpace,
    coboundary,
    differential_blocks,
    differential_matrix,
    format_cochain,
    is_cocycle,
    parse_cochain,
)
from dtorsion.errors import DegreeError, FormatError, ModulusError, ShapeError
from dtorsion.groups import cyclic, direct_product, symmetric

V4 = direct_product(cyclic(2), cyclic(2))
S3 = symmetric(3)
Z4 = cyclic(4)


def _random_cochain(space, rng):
    return space.from_vector(rng.integers(0, space.modulus, size=space.slots))


def test_slots_and_index_round_trip():
    for g, p in [(V4, 1), (V4, 2), (S3, 2), (S3, 3), (Z4, 3)]:
        space = CochainSpace(g, p, len(g))
        assert space.slots == (len(g) - 1) ** p
        for idx in range(space.slots):
            args = space.args_of(idx)
            assert len(args) == p
            assert all(x != g.identity for x in args)
            assert space.index_of(args) == idx


def test_identity_arguments_read_zero():
    space = CochainSpace(S3, 2, 6)
    rng = np.random.default_rng(1)
    c = _random_cochain(space, rng)
    e = S3.identity
    for g in S3.elements():
        assert c.value(e, g) == 0
        assert c.value(g, e) == 0
    assert str(c.phase(e, e)) == "0/1"


def test_coboundary_formula_degree_one():
    # (df)(g, h) = f(h) - f(gh) + f(g), with identity slots pinned to 0
    rng = np.random.default_rng(2)
    for g in (V4, S3):
        N = len(g)
        space1 = CochainSpace(g, 1, N)
        f = _random_cochain(space1, rng)
        df = coboundary(f)
        for a in g.elements():
            for b in g.elements():
                want = (f.value(b) - f.value(g.mul(a, b)) + f.value(a)) % N
                assert df.value(a, b) == want


def test_coboundary_formula_degree_two():
    # (dw)(a,b,c) = w(b,c) - w(ab,c) + w(a,bc) - w(a,b)
    rng = np.random.default_rng(3)
    for g in (V4, S3):
        N = len(g)
        space2 = CochainSpace(g, 2, N)
        w = _random_cochain(space2, rng)
        dw = coboundary(w)
        for a in g.elements():
            for b in g.elements():
                for c in g.elements():
                    want = (
                        w.value(b, c)
                        - w.value(g.mul(a, b), c)
                        + w.value(a, g.mul(b, c))
                        - w.value(a, b)
                    ) % N
                    assert dw.value(a, b, c) == want


def test_d_squared_is_zero():
    rng = np.random.default_rng(4)
    for g in (V4, S3, Z4):
        for p in (1, 2):
            space = CochainSpace(g, p, len(g))
            for _ in range(5):
                c = _random_cochain(space, rng)
                assert coboundary(coboundary(c)).is_zero()


def test_coboundaries_are_cocycles():
    rng = np.random.default_rng(5)
    for g in (V4, S3):
        space = CochainSpace(g, 1, len(g))
        for _ in range(10):
            c = _random_cochain(space, rng)
            assert is_cocycle(coboundary(c))


def test_differential_matrix_matches_coboundary():
    rng = np.random.default_rng(6)
    for g, p in [(V4, 1), (V4, 2), (S3, 1), (S3, 2)]:
        N = len(g)
        space = CochainSpace(g, p, N)
        D = differential_matrix(space, N)
        assert D.shape == ((len(g) - 1) ** (p + 1), space.slots)
        for _ in range(5):
            c = _random_cochain(space, rng)
            assert np.array_equal((D @ c.table) % N, coboundary(c).table)


def test_differential_blocks_concatenate_to_matrix():
    space = CochainSpace(S3, 2, 6)
    D = differential_matrix(space, 6)
    rows = np.vstack(list(differential_blocks(space, 6, block_rows=7)))
    assert np.array_equal(D, rows)


def test_cochain_algebra():
    rng = np.random.default_rng(7)
    space = CochainSpace(V4, 2, 4)
    a = _random_cochain(space, rng)
    b = _random_cochain(space, rng)
    assert (a + b) - b == a
    assert (a - a).is_zero()
    assert (-a) + a == space.zero()
    assert a.scaled(3) == a + a + a
    assert a.scaled(0).is_zero()


def test_space_mismatch_rejected():
    a = CochainSpace(V4, 2, 4).zero()
    b = CochainSpace(V4, 2, 8).zero()
    with pytest.raises(ShapeError):
        a + b


def test_space_validation():
    with pytest.raises(DegreeError):
        CochainSpace(V4, -1, 4)
    with pytest.raises(ModulusError):
        CochainSpace(V4, 2, 0)
    # degree 0 exists: constants, with the lone slot count 1
    assert CochainSpace(V4, 0, 4).slots == 1


def test_phase_of_entry():
    space = CochainSpace(Z4, 2, 4)
    vec = np.zeros(space.slots, dtype=np.int64)
    vec[space.index_of((1, 1))] = 3
    c = space.from_vector(vec)
    assert str(c.phase(1, 1)) == "3/4"
    assert c.phase(2, 2).is_one or c.value(2, 2) == 0


def test_format_parse_round_trip():
    rng = np.random.default_rng(8)
    for g, p in [(V4, 2), (S3, 2), (Z4, 3)]:
        space = CochainSpace(g, p, len(g))
        c = _random_cochain(space, rng)
        text = format_cochain(c)
        back = parse_cochain(text, g)
        assert back == c
        # canonical: formatting the parse reproduces the text
        assert format_cochain(back) == text


def test_parse_rejects_malformed():
    z = cyclic(2)
    good = 'cocycle degree=2 modulus=2 group="Z2"\n1 1 1\n'
    assert parse_cochain(good, z).value(1, 1) == 1
    for bad in (
        "",
        "nonsense\n",
        'cocycle degree=2 modulus=2 group="Z2"\n1 1\n',  # missing value
        'cocycle degree=2 modulus=2 group="Z2"\n1 9 1\n',  # out of range
        'cocycle degree=2 modulus=2 group="Z2"\n0 1 1\n',  # identity slot
        'cocycle degree=2 modulus=2 group="Z2"\n1 x 1\n',
    ):
        with pytest.raises(FormatError):
            parse_cochain(bad, z)


def test_parse_ignores_comments_and_blank_lines():
    z = cyclic(2)
    text = '# header comment\ncocycle degree=2 modulus=2 group="Z2"\n\n# entry\n1 1 1\n'
    assert parse_cochain(text, z).value(1, 1) == 1
