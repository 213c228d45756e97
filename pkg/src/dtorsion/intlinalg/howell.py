"""Howell form of a row span over Z/N.

The Howell basis is the canonical generating set of a submodule of
(Z/N)^n: rows have distinct pivot columns in increasing order, each
pivot divides N, and every entry above a pivot is reduced mod that
pivot. Its defining property is that greedy reduction against the rows
(left to right) sends exactly the members of the span to zero and every
coset to one canonical representative, which is what the coboundary
membership tests and canonical cocycle representatives lean on.
"""

from __future__ import annotations

from math import gcd

import numpy as np


def _unit_scaling(p: int, N: int) -> tuple[int, int]:
    """A unit u mod N with u*p = gcd(p, N) mod N; returns (u, gcd)."""
    g = gcd(p, N)
    a = pow(p // g, -1, N // g) if N > g else 1
    # a*(p/g) = 1 mod N/g, so a*p = g mod N up to the unit adjustment
    step = N // g
    u = a % N
    while gcd(u, N) != 1:
        u = (u + step) % N
    assert (u * p) % N == g % N
    return u, g


def _pivot_cols(H, n: int):
    out = []
    for i in range(H.shape[0]):
        nz = np.nonzero(H[i, :n])[0]
        out.append(int(nz[0]) if nz.size else -1)
    return out


def howell_mod(M, N: int, track: bool = False):
    """Howell basis of the row span of M over Z/N.

    Returns H, or (H, C) when track=True with H = C @ M mod N. Rows of H
    have strictly increasing pivot columns, pivots dividing N, and
    entries above each pivot reduced mod the pivot.
    """
    from . import echelon

    if N < 1:
        raise ValueError("modulus must be positive")
    M = np.asarray(M, dtype=np.int64) % N
    k, n = M.shape
    if track:
        W = np.hstack([M, np.eye(k, dtype=np.int64)])
    else:
        W = M.copy()

    prev = None
    while True:
        W = echelon(W, N)
        pivots = _pivot_cols(W, n)
        keep = [i for i, c in enumerate(pivots) if c >= 0]
        W = W[keep]
        pivots = [pivots[i] for i in keep]
        # Scale so each pivot is its gcd with N (a divisor of N).
        for i, c in enumerate(pivots):
            u, g = _unit_scaling(int(W[i, c]), N)
            if int(W[i, c]) != g:
                W[i] = (u * W[i]) % N
        real = W[:, :n]
        key = real.tobytes()
        if key == prev:
            break
        prev = key
        # Absorb annihilator shadows (N/g) * row until the span of the
        # leading segments stabilizes.
        shadows = []
        for i, c in enumerate(pivots):
            g = int(W[i, c])
            if g != N:
                s = ((N // g) * W[i]) % N
                if np.any(s[:n]):
                    shadows.append(s)
        if shadows:
            W = np.vstack([W] + [s[None, :] for s in shadows])
    # Reduce entries above each pivot mod the pivot. Ascending order:
    # cleaning column c_i only perturbs columns > c_i, which later
    # iterations clean in turn.
    for i in range(W.shape[0]):
        c = pivots[i]
        g = int(W[i, c])
        for j in range(i):
            q = int(W[j, c]) // g
            if q:
                W[j] = (W[j] - q * W[i]) % N
    if track:
        return W[:, :n].copy(), W[:, n:].copy()
    return W


def reduce_mod(H, x, N: int, coeffs: bool = False):
    """Canonical representative of x modulo the span of Howell rows H.

    Greedy left-to-right reduction; the result is zero exactly when x is
    in the span. With coeffs=True also returns y with x = y @ H + result
    mod N.
    """
    H = np.asarray(H)
    x = np.asarray(x, dtype=np.int64).copy() % N
    n = x.shape[0]
    y = np.zeros(H.shape[0], dtype=np.int64)
    for i in range(H.shape[0]):
        nz = np.nonzero(H[i])[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        g = int(H[i, c])
        q = int(x[c]) // g
        if q:
            x = (x - q * H[i]) % N
            y[i] = q % N
    if coeffs:
        return x, y
    return x


def solve_mod(M, x, N: int):
    """Coefficients y with y @ M = x mod N, or None when unsolvable."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] == 0:
        cand = np.asarray(x, dtype=np.int64) % N
        return np.zeros(0, dtype=np.int64) if not np.any(cand) else None
    H, C = howell_mod(M, N, track=True)
    rem, yh = reduce_mod(H, x, N, coeffs=True)
    if np.any(rem):
        return None
    y = (yh @ C) % N
    assert not np.any((y @ M - np.asarray(x)) % N)
    return y
