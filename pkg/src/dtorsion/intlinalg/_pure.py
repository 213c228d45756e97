"""Pure-Python exact integer kernels (numpy-vectorized).

Two in-place workhorses shared by everything downstream:

* ``echelon_inplace(W, mod)``: row-space echelon with distinct pivot
  columns, by unimodular row operations. With ``mod`` > 0 all entries live
  in [0, mod) and perturbations by multiples of ``mod`` are allowed (the
  row space is preserved together with mod*Z^n, which is all any caller
  needs). With ``mod`` = 0 the reduction is over Z.
* ``diagonalize_inplace(W, mod, T, tmods, chain)``: Smith-style
  diagonalization by unimodular row and column operations, updating the
  transform matrices in ``T`` (any of "u", "uinv", "v", "vinv") in step so
  that U A V = D. Each transform is reduced mod its entry in ``tmods``
  (0 means exact).

Integer growth: mod > 0 keeps every matrix entry below mod (< 2^16 in all
uses), so int64 is always safe. Over Z the kernels run on int64 with
magnitude preflights and raise OverflowError when one trips; the dispatch
layer retries with exact=True, which switches to object (bignum) arrays.
"""

from __future__ import annotations

from math import gcd

import numpy as np

GUARD = 1 << 62

_COMPACT_EVERY = 32


def prep(A, mod: int, exact: bool = False):
    """Copy A into a fresh work array (int64, or object when exact)."""
    dtype = object if (mod == 0 and exact) else np.int64
    W = np.array(A, dtype=dtype, copy=True)
    if W.ndim != 2:
        raise ValueError("expected a 2-D array")
    if mod:
        W %= mod
    return W


def _balanced(col, mod: int):
    if mod:
        return np.where(col > mod // 2, col - mod, col)
    return col


def _nearest_div(w, piv):
    # Round-to-nearest division, exact in integers; piv > 0.
    return (2 * w + piv) // (2 * piv)


def _maxabs(block) -> int:
    if block.size == 0:
        return 0
    return max(int(block.max()), -int(block.min()))


def _preflight(q, src, dst, count: int = 1) -> None:
    # int64 only: each dst element absorbs at most ``count`` products.
    if dst.dtype == object:
        return
    if count * _maxabs(q) * _maxabs(src) + _maxabs(dst) > GUARD:
        raise OverflowError("integer kernel guard tripped")


def echelon_inplace(W, mod: int = 0) -> int:
    """Reduce W to row echelon in place; returns the number of rows kept.

    Rows of the result have distinct pivot columns and span the row space
    of the input (together with mod*Z^n when ``mod`` is given). Rows past
    the returned count are garbage.
    """
    m, n = W.shape
    if m == 0 or n == 0:
        return 0
    r = 0
    alive = m
    last_compact = 0
    for c in range(n):
        if r == alive:
            break
        right = W[:, c:]
        while True:
            col = W[r:alive, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                break
            bal = _balanced(col[nz], mod)
            pick = int(nz[int(np.argmin(abs(bal)))])
            if pick:
                W[[r, r + pick]] = W[[r + pick, r]]
            if mod:
                if W[r, c] > mod // 2:
                    W[r] = (-W[r]) % mod
            elif W[r, c] < 0:
                W[r] = -W[r]
            if nz.size == 1:
                r += 1
                break
            piv = W[r, c]
            w = _balanced(W[r + 1 : alive, c], mod)
            q = _nearest_div(w, piv)
            hit = np.nonzero(q)[0]
            if hit.size:
                rows = hit + r + 1
                if not mod:
                    _preflight(q[hit], right[r], right[rows])
                right[rows] -= np.outer(q[hit], right[r])
                if mod:
                    right[rows] %= mod
        if c - last_compact >= _COMPACT_EVERY and r < alive:
            body = right[r:alive]
            keep = np.nonzero([bool(np.any(row)) for row in body])[0]
            if keep.size < alive - r:
                W[r : r + keep.size] = W[r:alive][keep]
                alive = r + keep.size
            last_compact = c
    return r


def echelon(A, mod: int = 0, exact: bool = False):
    """Convenience wrapper: prep a copy, reduce, return the kept rows."""
    W = prep(A, mod, exact)
    r = echelon_inplace(W, mod)
    return W[:r].copy()


class _Tracker:
    """Transform accumulators, updated in step with the ops on A."""

    def __init__(self, T: dict, tmods: dict):
        self.u = T.get("u")
        self.uinv = T.get("uinv")
        self.v = T.get("v")
        self.vinv = T.get("vinv")
        self.tmods = tmods

    def _post(self, name) -> None:
        tm = self.tmods.get(name, 0)
        if tm:
            mat = getattr(self, name)
            np.mod(mat, tm, out=mat)

    # Row ops on A are A <- E A: U <- E U, Uinv <- Uinv E^-1.
    def row_batch(self, rows, q, k) -> None:
        if self.u is not None:
            if not self.tmods.get("u", 0):
                _preflight(q, self.u[k], self.u[rows])
            self.u[rows] -= np.outer(q, self.u[k])
            self._post("u")
        if self.uinv is not None:
            if not self.tmods.get("uinv", 0):
                _preflight(q, self.uinv[:, rows], self.uinv[:, k], count=len(q))
            self.uinv[:, k] += self.uinv[:, rows] @ q
            self._post("uinv")

    def row_swap(self, i, j) -> None:
        if self.u is not None:
            self.u[[i, j]] = self.u[[j, i]]
        if self.uinv is not None:
            self.uinv[:, [i, j]] = self.uinv[:, [j, i]]

    def row_neg(self, i) -> None:
        if self.u is not None:
            self.u[i] = -self.u[i]
            self._post("u")
        if self.uinv is not None:
            self.uinv[:, i] = -self.uinv[:, i]
            self._post("uinv")

    # Column ops on A are A <- A F: V <- V F, Vinv <- F^-1 Vinv.
    def col_batch(self, cols, q, k) -> None:
        if self.v is not None:
            if not self.tmods.get("v", 0):
                _preflight(q, self.v[:, k], self.v[:, cols])
            self.v[:, cols] -= np.outer(self.v[:, k], q)
            self._post("v")
        if self.vinv is not None:
            if not self.tmods.get("vinv", 0):
                _preflight(q, self.vinv[cols], self.vinv[k], count=len(q))
            self.vinv[k] += q @ self.vinv[cols]
            self._post("vinv")

    def col_swap(self, i, j) -> None:
        if self.v is not None:
            self.v[:, [i, j]] = self.v[:, [j, i]]
        if self.vinv is not None:
            self.vinv[[i, j]] = self.vinv[[j, i]]

    def col_neg(self, j) -> None:
        if self.v is not None:
            self.v[:, j] = -self.v[:, j]
            self._post("v")
        if self.vinv is not None:
            self.vinv[j] = -self.vinv[j]
            self._post("vinv")


def _ideal(x, mod: int) -> int:
    return gcd(int(x), mod) if mod else abs(int(x))


def diagonalize_inplace(
    W, mod: int, T: dict, tmods: dict, chain: bool = True
) -> list:
    """Diagonalize W in place by unimodular ops, min-|pivot| first.

    Returns the diagonal as a list of ints (length min(m, n)). With
    chain=True each diagonal ideal divides the next: over Z the usual
    invariant-factor chain with zeros last, mod N the chain on gcd(d, N).
    """
    m, n = W.shape
    trk = _Tracker(T, tmods)

    def normalize_pivot(k) -> None:
        if mod:
            if W[k, k] > mod // 2:
                W[k] = (-W[k]) % mod
                trk.row_neg(k)
        elif W[k, k] < 0:
            W[k] = -W[k]
            trk.row_neg(k)

    def clear_col(k) -> bool:
        changed = False
        while True:
            col = W[k:, k]
            nz = np.nonzero(col)[0]
            if nz.size == 0 or (nz.size == 1 and nz[0] == 0):
                return changed
            bal = _balanced(col[nz], mod)
            pick = int(nz[int(np.argmin(abs(bal)))])
            if pick:
                W[[k, k + pick]] = W[[k + pick, k]]
                trk.row_swap(k, k + pick)
                changed = True
            normalize_pivot(k)
            piv = W[k, k]
            w = _balanced(W[k + 1 :, k], mod)
            q = _nearest_div(w, piv)
            hit = np.nonzero(q)[0]
            if hit.size:
                rows = hit + k + 1
                if not mod:
                    _preflight(q[hit], W[k], W[rows])
                W[rows] -= np.outer(q[hit], W[k])
                if mod:
                    W[rows] %= mod
                trk.row_batch(rows, q[hit], k)
                changed = True

    def clear_row(k) -> bool:
        changed = False
        while True:
            row = W[k, k:]
            nz = np.nonzero(row)[0]
            if nz.size == 0 or (nz.size == 1 and nz[0] == 0):
                return changed
            bal = _balanced(row[nz], mod)
            pick = int(nz[int(np.argmin(abs(bal)))])
            if pick:
                W[:, [k, k + pick]] = W[:, [k + pick, k]]
                trk.col_swap(k, k + pick)
                changed = True
            normalize_pivot(k)
            piv = W[k, k]
            w = _balanced(W[k, k + 1 :], mod)
            q = _nearest_div(w, piv)
            hit = np.nonzero(q)[0]
            if hit.size:
                cols = hit + k + 1
                if not mod:
                    _preflight(q[hit], W[:, k], W[:, cols])
                W[:, cols] -= np.outer(W[:, k], q[hit])
                if mod:
                    W[:, cols] %= mod
                trk.col_batch(cols, q[hit], k)
                changed = True

    limit = min(m, n)
    for k in range(limit):
        sub = W[k:, k:]
        if sub.size <= 1 << 20:
            nzr, nzc = np.nonzero(sub)
            if nzr.size == 0:
                break
            bal = abs(_balanced(sub[nzr, nzc], mod))
            best = int(np.argmin(bal))
            bi, bj = int(nzr[best]) + k, int(nzc[best]) + k
        else:
            # Too wide for a global min-|entry| scan: take the first
            # nonzero column and let the clearing loops pick pivots.
            bi = bj = -1
            for j in range(k, n):
                nz = np.nonzero(W[k:, j])[0]
                if nz.size:
                    bi, bj = int(nz[0]) + k, j
                    break
            if bi < 0:
                break
        if bi != k:
            W[[k, bi]] = W[[bi, k]]
            trk.row_swap(k, bi)
        if bj != k:
            W[:, [k, bj]] = W[:, [bj, k]]
            trk.col_swap(k, bj)
        while clear_col(k) or clear_row(k):
            pass
        normalize_pivot(k)

    if chain:
        # Pairwise merges until every diagonal ideal divides the next.
        def merge(i, j) -> None:
            # col_i += col_j brings d_j into column i, then local Euclid.
            minus_one = np.array([-1], dtype=W.dtype)
            if not mod:
                _preflight(minus_one, W[:, j], W[:, i])
            W[:, i] += W[:, j]
            if mod:
                W[:, i] %= mod
            trk.col_batch(np.array([i]), minus_one, j)
            while clear_col(i) or clear_row(i):
                pass
            normalize_pivot(i)
            normalize_pivot(j)

        changed = True
        while changed:
            changed = False
            for i in range(limit):
                for j in range(i + 1, limit):
                    di, dj = _ideal(W[i, i], mod), _ideal(W[j, j], mod)
                    if mod == 0:
                        if di == 0 and dj != 0:
                            W[[i, j]] = W[[j, i]]
                            trk.row_swap(i, j)
                            W[:, [i, j]] = W[:, [j, i]]
                            trk.col_swap(i, j)
                            changed = True
                            continue
                        if di == 0 or dj == 0:
                            continue
                    if dj % di:
                        merge(i, j)
                        changed = True

    return [int(W[i, i]) for i in range(limit)]


def diagonalize(
    A,
    mod: int = 0,
    transforms: tuple = (),
    tmods: dict | None = None,
    chain: bool = True,
    exact: bool = False,
):
    """Convenience wrapper: prep a copy, diagonalize, return (d, T)."""
    W = prep(A, mod, exact)
    m, n = W.shape
    T = {}
    for name in transforms:
        dim = m if name in ("u", "uinv") else n
        T[name] = np.eye(dim, dtype=W.dtype)
    full_tmods = {name: mod for name in ("u", "uinv", "v", "vinv")}
    full_tmods.update(tmods or {})
    d = diagonalize_inplace(W, mod, T, full_tmods, chain)
    return d, T
