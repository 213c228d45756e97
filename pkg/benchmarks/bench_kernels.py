"""Compare the compiled and pure-numpy echelon kernels on bar-resolution
differentials, the only matrices the hot path ever sees.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is reduced by both backends and the results are checked to
be identical before the table is printed, so a broken extension build
shows up here rather than as a silent wrong timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dtorsion.cochains import CochainSpace, differential_blocks, differential_matrix
from dtorsion.groups import dihedral, direct_product, cyclic, quaternion, symmetric
from dtorsion.intlinalg import _pure

try:
    from dtorsion.intlinalg import _speedups
except ImportError:
    _speedups = None


def dense_workload(group, degree):
    space = CochainSpace(group, degree, group.order)
    return differential_matrix(space, mod=group.order), group.order


def reduce_dense(backend, matrix, mod):
    W = _pure.prep(matrix, mod, False)
    r = backend.echelon_inplace(W, mod)
    return W[:r].copy()


def reduce_streamed(backend, group, degree, mod, block_rows=2048):
    space = CochainSpace(group, degree, mod)
    E = np.zeros((0, space.slots), dtype=np.int64)
    for block in differential_blocks(space, mod, block_rows=block_rows):
        W = _pure.prep(np.vstack([E, block]), mod, False)
        r = backend.echelon_inplace(W, mod)
        E = W[:r].copy()
    return E


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()

    if _speedups is None:
        raise SystemExit(
            "compiled extension not built; reinstall with a C compiler available"
        )

    v4 = direct_product(cyclic(2), cyclic(2))
    rows = []
    for name, group, degree in [
        ("Z2xZ2 d3", v4, 3),
        ("S3 d3", symmetric(3), 3),
        ("D4 d3", dihedral(4), 3),
        ("Q8 d3", quaternion(), 3),
    ]:
        matrix, mod = dense_workload(group, degree)
        t_pure, out_pure = best_of(
            lambda: reduce_dense(_pure, matrix, mod), args.repeat
        )
        t_fast, out_fast = best_of(
            lambda: reduce_dense(_speedups, matrix, mod), args.repeat
        )
        assert np.array_equal(out_pure, out_fast), name
        rows.append((name, matrix.shape, t_pure, t_fast))

    s4 = symmetric(4)
    t_pure, out_pure = best_of(
        lambda: reduce_streamed(_pure, s4, 2, s4.order), args.repeat
    )
    t_fast, out_fast = best_of(
        lambda: reduce_streamed(_speedups, s4, 2, s4.order), args.repeat
    )
    assert np.array_equal(out_pure, out_fast)
    shape = ((s4.order - 1) ** 3, (s4.order - 1) ** 2)
    rows.append(("S4 d2 streamed", shape, t_pure, t_fast))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'rows x cols':>13}  {'pure':>9}  "
          f"{'compiled':>9}  {'ratio':>6}")
    for name, (m, n), t_pure, t_fast in rows:
        ratio = t_pure / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<{width}}  {m:>6} x {n:<4}  {t_pure:>8.3f}s  "
              f"{t_fast:>8.3f}s  {ratio:>5.1f}x")


if __name__ == "__main__":
    main()
