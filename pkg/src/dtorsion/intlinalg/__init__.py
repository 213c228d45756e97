"""Exact integer linear algebra: echelon, Smith-style diagonalization,
Howell forms over Z/N.

The echelon kernel has two interchangeable backends: a compiled Cython
extension (built at install time when a C compiler is available) and a
pure-numpy fallback. The compiled one is picked automatically; set
DTORSION_PURE_KERNELS=1 to force the fallback. Diagonalization is always
the numpy implementation: it only ever runs on small square matrices, so
there is nothing to win by compiling it.

Integral (mod=0) calls run on int64 and transparently retry with exact
bignum arithmetic if entries outgrow the overflow guard.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pure

if os.environ.get("DTORSION_PURE_KERNELS") == "1":
    _compiled = None
else:
    try:
        from . import _speedups as _compiled
    except ImportError:
        _compiled = None

BACKEND = "pure" if _compiled is None else "compiled"


def echelon(A, mod: int = 0, exact: bool = False):
    """Row echelon of A by unimodular row ops (plus mod-multiple shifts).

    Returns a new (r x n) array whose rows have distinct pivot columns,
    appear in pivot-column order, and span the row space of A (together
    with mod*Z^n when ``mod`` > 0). With ``mod`` = 0 the reduction is
    over Z; exact=True forces bignum arithmetic up front.
    """
    W = _pure.prep(A, mod, exact)
    try:
        if _compiled is not None and W.dtype == np.int64:
            r = _compiled.echelon_inplace(W, mod)
        else:
            r = _pure.echelon_inplace(W, mod)
    except OverflowError:
        if mod or exact:
            raise
        return echelon(A, mod, exact=True)
    return W[:r].copy()


def echelon_stream(blocks, ncols: int, mod: int = 0):
    """Echelon of a tall matrix delivered as an iterable of row blocks.

    Absorbs one block at a time, so only the running echelon (at most
    ncols rows) plus a single block is ever in memory.
    """
    E = np.zeros((0, ncols), dtype=np.int64)
    for block in blocks:
        block = np.asarray(block)
        if block.size == 0:
            continue
        if block.shape[1] != ncols:
            raise ValueError("block width mismatch")
        E = echelon(np.vstack([E, block]), mod)
    return E


def rank(A) -> int:
    """Rank over Q (unimodular row ops preserve the row space)."""
    return echelon(A).shape[0]


def diagonalize(
    A,
    mod: int = 0,
    transforms: tuple = (),
    tmods: dict | None = None,
    chain: bool = True,
    exact: bool = False,
):
    """Diagonalize A by unimodular row/column ops; returns (d, T).

    d is the diagonal (length min(m, n)); T maps each name in
    ``transforms`` ("u", "uinv", "v", "vinv") to its matrix, with
    U A V = D. With chain=True each diagonal ideal divides the next:
    over Z the invariant-factor chain with zeros last, mod N the chain
    on gcd(d, N). Transform accumulators are reduced mod ``tmods[name]``
    (default: ``mod``; 0 means exact).
    """
    W = _pure.prep(A, mod, exact)
    m, n = W.shape
    T = {}
    for name in transforms:
        dim = m if name in ("u", "uinv") else n
        T[name] = np.eye(dim, dtype=W.dtype)
    full_tmods = {name: mod for name in ("u", "uinv", "v", "vinv")}
    full_tmods.update(tmods or {})
    try:
        d = _pure.diagonalize_inplace(W, mod, T, full_tmods, chain)
    except OverflowError:
        if mod or exact:
            raise
        return diagonalize(A, mod, transforms, tmods, chain, exact=True)
    return d, T


def smith_normal_form(A):
    """Invariant-factor diagonal of an integer matrix, with transforms.

    Returns (d, U, V) with U A V = diag(d), each nonzero d[i] positive,
    d[i] | d[i+1], and zeros last.
    """
    d, T = diagonalize(A, 0, transforms=("u", "v"), chain=True)
    return d, T["u"], T["v"]


from .howell import howell_mod, reduce_mod, solve_mod  # noqa: E402

__all__ = [
    "BACKEND",
    "echelon",
    "echelon_stream",
    "rank",
    "diagonalize",
    "smith_normal_form",
    "howell_mod",
    "reduce_mod",
    "solve_mod",
]
