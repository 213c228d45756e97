"""Exact linear algebra kernels: echelon, diagonalization, Howell forms.

The Smith-form oracle here is independent of the library code: invariant
factors are recovered from determinantal divisors (gcds of k x k minors),
computed with exact Python ints.
"""

from __future__ import annotations

from itertools import combinations
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtorsion import intlinalg
from dtorsion.intlinalg import _pure

try:
    from dtorsion.intlinalg import _speedups
except ImportError:
    _speedups = None


def _det(M):
    # cofactor expansion, exact ints; fine for k <= 4
    if len(M) == 1:
        return M[0][0]
    s = 0
    for j in range(len(M)):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        s += (-1) ** j * M[0][j] * _det(minor)
    return s


def determinantal_divisor_factors(A):
    """Nonzero invariant factors of A via gcds of k x k minors."""
    m, n = A.shape
    facs = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                sub = [[int(A[r, c]) for c in cols] for r in rows]
                g = gcd(g, _det(sub))
        if g == 0:
            break
        facs.append(g // prev)
        prev = g
    return facs


def rank_over_Q(A):
    """Row reduction with Fractions, no library code involved."""
    from fractions import Fraction

    rows = [[Fraction(int(v)) for v in row] for row in A]
    r = 0
    for c in range(A.shape[1]):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def test_rank_matches_fraction_elimination():
    rng = np.random.default_rng(11)
    for _ in range(60):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 7))
        A = rng.integers(-9, 10, size=(m, n)).astype(np.int64)
        assert intlinalg.rank(A) == rank_over_Q(A)


def test_smith_normal_form_known_values():
    A = np.array([[2, 4, 4], [-6, 6, 12], [10, 4, 16]], dtype=np.int64)
    d, U, V = intlinalg.smith_normal_form(A)
    assert [int(x) for x in d] == [2, 2, 156]
    A = np.array([[1, 0], [0, 1]], dtype=np.int64)
    d, _, _ = intlinalg.smith_normal_form(A)
    assert [int(x) for x in d] == [1, 1]
    A = np.zeros((2, 3), dtype=np.int64)
    d, _, _ = intlinalg.smith_normal_form(A)
    assert [int(x) for x in d] == [0, 0]


def test_smith_normal_form_against_minor_gcds():
    rng = np.random.default_rng(23)
    for _ in range(40):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        A = rng.integers(-6, 7, size=(m, n)).astype(np.int64)
        d, U, V = intlinalg.smith_normal_form(A)
        got = [int(x) for x in d if x != 0]
        assert got == determinantal_divisor_factors(A)
        # the transforms actually certify the diagonal
        P = U @ A @ V
        D = np.zeros_like(P)
        for i, x in enumerate(d):
            D[i, i] = x
        assert np.array_equal(P, D)
        assert abs(round(float(np.linalg.det(U.astype(float))))) == 1
        assert abs(round(float(np.linalg.det(V.astype(float))))) == 1


def test_invariant_factor_chain_divides():
    rng = np.random.default_rng(5)
    for _ in range(40):
        A = rng.integers(-20, 21, size=(5, 5)).astype(np.int64)
        d, _, _ = intlinalg.smith_normal_form(A)
        nz = [int(x) for x in d if x != 0]
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0
        # zeros trail
        tail = list(d[len(nz) :])
        assert all(x == 0 for x in tail)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_unimodular_row_ops_preserve_invariant_factors(seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-5, 6, size=(4, 4)).astype(np.int64)
    d0, _, _ = intlinalg.smith_normal_form(A)
    B = A.copy()
    for _ in range(6):
        i, j = rng.integers(0, 4, size=2)
        if i != j:
            B[i] += int(rng.integers(-3, 4)) * B[j]
    k = int(rng.integers(0, 4))
    B[k] *= -1
    d1, _, _ = intlinalg.smith_normal_form(B)
    assert [int(x) for x in d0] == [int(x) for x in d1]


@pytest.mark.skipif(_speedups is None, reason="compiled kernel not built")
def test_compiled_and_pure_echelon_agree_exactly():
    rng = np.random.default_rng(7)
    for _ in range(300):
        m = int(rng.integers(1, 8))
        n = int(rng.integers(1, 8))
        mod = int(rng.choice([0, 2, 3, 4, 6, 12, 24]))
        A = rng.integers(-9, 10, size=(m, n)).astype(np.int64)
        Wc = _pure.prep(A, mod, False)
        rc = _speedups.echelon_inplace(Wc, mod)
        Wp = _pure.prep(A, mod, False)
        rp = _pure.echelon_inplace(Wp, mod)
        assert rc == rp
        assert np.array_equal(Wc[:rc], Wp[:rp])


def test_echelon_mod_preserves_span():
    # Compare row spans mod N through the canonical Howell form.
    rng = np.random.default_rng(13)
    for _ in range(60):
        N = int(rng.choice([2, 3, 4, 6, 8, 12]))
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 6))
        A = rng.integers(0, N, size=(m, n)).astype(np.int64)
        E = intlinalg.echelon(A, N)
        HA = intlinalg.howell_mod(A, N)
        HE = intlinalg.howell_mod(E, N) if E.shape[0] else E.reshape(0, n)
        if HA.shape[0] == 0 and HE.shape[0] == 0:
            continue
        assert np.array_equal(HA, HE)


def test_echelon_pivots_are_strictly_ordered():
    rng = np.random.default_rng(17)
    for _ in range(40):
        A = rng.integers(-9, 10, size=(6, 5)).astype(np.int64)
        E = intlinalg.echelon(A)
        pivots = [int(np.nonzero(row)[0][0]) for row in E]
        assert pivots == sorted(set(pivots))


def _same_lattice(E1, E2):
    # Equal-rank lattices with L1, L2 <= L1+L2 and equal invariant
    # factors all around are equal (the index of a full-rank sublattice
    # is the ratio of invariant-factor products).
    if E1.shape[0] != E2.shape[0]:
        return False
    stacked = np.vstack([E1, E2])
    f = lambda M: [int(x) for x in intlinalg.smith_normal_form(M)[0] if x]
    return f(E1) == f(stacked) == f(E2)


def test_echelon_stream_matches_batch():
    rng = np.random.default_rng(19)
    A = rng.integers(-4, 5, size=(40, 7)).astype(np.int64)
    # over Z the result is canonical only as a span
    batch = intlinalg.echelon(A)
    blocks = [A[i : i + 9] for i in range(0, 40, 9)]
    streamed = intlinalg.echelon_stream(blocks, 7)
    assert _same_lattice(batch, streamed)
    # mod N, compare through the canonical Howell form
    batch6 = intlinalg.echelon(A, 6)
    streamed6 = intlinalg.echelon_stream(blocks, 7, 6)
    assert np.array_equal(
        intlinalg.howell_mod(batch6, 6), intlinalg.howell_mod(streamed6, 6)
    )


def test_echelon_exact_handles_huge_entries():
    A = np.array(
        [[10**14, 1], [1, 10**14]], dtype=object
    )  # product overflows int64
    E = intlinalg.echelon(A, exact=True)
    assert E.shape[0] == 2
    assert intlinalg.rank(np.array([[10**14, 1], [1, 10**14]], dtype=np.int64)) == 2


def test_diagonalize_mod_chain():
    rng = np.random.default_rng(29)
    for _ in range(40):
        N = int(rng.choice([4, 6, 8, 12]))
        A = rng.integers(0, N, size=(4, 4)).astype(np.int64)
        d, _ = intlinalg.diagonalize(A, N)
        chain = [gcd(int(x), N) for x in d]
        for a, b in zip(chain, chain[1:]):
            assert b % a == 0


def test_diagonalize_transforms_mod():
    rng = np.random.default_rng(31)
    for _ in range(30):
        N = int(rng.choice([4, 6, 9]))
        A = rng.integers(0, N, size=(3, 4)).astype(np.int64)
        d, T = intlinalg.diagonalize(A, N, transforms=("u", "uinv", "v", "vinv"))
        U, Ui, V, Vi = T["u"], T["uinv"], T["v"], T["vinv"]
        D = np.zeros((3, 4), dtype=np.int64)
        for i, x in enumerate(d):
            D[i, i] = x
        assert not np.any((U @ A @ V - D) % N)
        assert np.array_equal((U @ Ui) % N, np.eye(3, dtype=np.int64))
        assert np.array_equal((V @ Vi) % N, np.eye(4, dtype=np.int64))


def test_howell_form_is_canonical_for_span():
    # Same span, different presentations -> identical Howell form.
    rng = np.random.default_rng(37)
    for _ in range(40):
        N = int(rng.choice([4, 6, 8, 12]))
        A = rng.integers(0, N, size=(3, 4)).astype(np.int64)
        H1 = intlinalg.howell_mod(A, N)
        # shuffle rows and add random row combinations
        B = A[rng.permutation(3)].copy()
        extra = (rng.integers(0, N, size=(2, 3)) @ A) % N
        B = np.vstack([B, extra])
        H2 = intlinalg.howell_mod(B, N)
        assert np.array_equal(H1, H2)


def test_solve_mod_planted_solutions():
    rng = np.random.default_rng(41)
    for _ in range(60):
        N = int(rng.choice([2, 4, 6, 9, 12]))
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        M = rng.integers(0, N, size=(m, n)).astype(np.int64)
        y0 = rng.integers(0, N, size=m).astype(np.int64)
        x = (y0 @ M) % N
        y = intlinalg.solve_mod(M, x, N)
        assert y is not None
        assert not np.any((y @ M - x) % N)


def test_solve_mod_detects_unsolvable():
    # brute force over all y for tiny instances
    rng = np.random.default_rng(43)
    for _ in range(40):
        N = int(rng.choice([2, 3, 4]))
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 4))
        M = rng.integers(0, N, size=(m, n)).astype(np.int64)
        x = rng.integers(0, N, size=n).astype(np.int64)
        reachable = False
        for code in range(N**m):
            y = np.array(
                [(code // N**i) % N for i in range(m)], dtype=np.int64
            )
            if not np.any((y @ M - x) % N):
                reachable = True
                break
        got = intlinalg.solve_mod(M, x, N)
        assert (got is not None) == reachable


def test_reduce_mod_zero_iff_in_span():
    rng = np.random.default_rng(47)
    for _ in range(60):
        N = int(rng.choice([4, 6, 8]))
        A = rng.integers(0, N, size=(3, 4)).astype(np.int64)
        H = intlinalg.howell_mod(A, N)
        y = rng.integers(0, N, size=3).astype(np.int64)
        inside = (y @ A) % N
        assert not np.any(intlinalg.reduce_mod(H, inside, N))
        x = rng.integers(0, N, size=4).astype(np.int64)
        rem, coeffs = intlinalg.reduce_mod(H, x, N, coeffs=True)
        assert not np.any((coeffs @ H + rem - x) % N)


def test_backend_flag_is_consistent():
    assert intlinalg.BACKEND in ("compiled", "pure")
    if _speedups is not None:
        assert intlinalg.BACKEND == "compiled"
