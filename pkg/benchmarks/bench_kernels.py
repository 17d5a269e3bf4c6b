"""Benchmark the jet product kernel: numba vs the pure-Python fallback.

Times raw coefficient-table products at each order and one end-to-end
workload (structure constants of su2, which exercises order-2 jets
through the full evaluator).  Run as

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
import timeit

import numpy as np

from tangentkit._kernels import _make_numba_kernel, _mul_python


def bench_raw(kernel, order: int, repeat: int) -> float:
    rng = np.random.default_rng(0)
    size = 1 << order
    pairs = [(rng.standard_normal(size), rng.standard_normal(size))
             for _ in range(256)]
    kernel(*pairs[0])  # warm up (JIT compile on the numba path)

    def run():
        for a, b in pairs:
            kernel(a, b)

    return min(timeit.repeat(run, number=1, repeat=repeat)) / len(pairs)


def bench_structure_constants(repeat: int) -> float:
    from tangentkit.groups import get_group
    from tangentkit.liegroup import structure_constants

    G = get_group("su2")
    structure_constants(G)  # warm up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        structure_constants(G)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    try:
        numba_kernel = _make_numba_kernel()
    except ImportError:
        numba_kernel = None
        print("numba not importable; timing the fallback only")

    print(f"{'order':>6} {'numpy (us)':>12} {'numba (us)':>12} {'speedup':>8}")
    for order in (1, 2, 3):
        t_np = bench_raw(_mul_python, order, args.repeat) * 1e6
        if numba_kernel is None:
            print(f"{order:>6} {t_np:>12.3f} {'-':>12} {'-':>8}")
            continue
        t_nb = bench_raw(numba_kernel, order, args.repeat) * 1e6
        print(f"{order:>6} {t_np:>12.3f} {t_nb:>12.3f} {t_np / t_nb:>8.2f}")

    # Sanity: both kernels agree bit for bit on a random order-3 pair.
    if numba_kernel is not None:
        rng = np.random.default_rng(1)
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        assert np.array_equal(numba_kernel(a, b), _mul_python(a, b))
        print("bitwise agreement: ok")

    t = bench_structure_constants(args.repeat)
    from tangentkit._kernels import BACKEND
    print(f"structure_constants(su2) with backend {BACKEND!r}: {t * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
