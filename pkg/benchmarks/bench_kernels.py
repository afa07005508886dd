"""Benchmark the numba kernels against the pure-numpy fallback.

Workload mirrors the hot verification paths: minimum slack of a uniform
comb class against every tour of K_8/K_9, full slack-matrix blocks, and
fraction-free rank on tour difference matrices.

Run:  python benchmarks/bench_kernels.py [--quick]
"""

import sys
import time

import numpy as np

from combprism import _kernels
from combprism.inequalities import CombInequality, enumerate_uniform_combs, tours_incidence_matrix
from combprism.structures import enumerate_tours


def build_workload(n: int, cap: int):
    tours = enumerate_tours(n)
    graph = tours[0].graph
    incidence = tours_incidence_matrix(tours)
    combs = enumerate_uniform_combs(n, 1, 2, cap=cap)
    coeffs = np.stack([CombInequality(c).coefficient_vector(graph) for c in combs])
    rhs = np.array([CombInequality(c).rhs for c in combs], dtype=np.int64)
    return coeffs, rhs, incidence


def timeit(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    quick = "--quick" in sys.argv
    n = 8
    cap = 500 if quick else 5000

    print(f"workload: (1,2)-uniform combs on K_{n} (cap {cap}) x all tours")
    coeffs, rhs, inc = build_workload(n, cap)
    print(f"  coeffs {coeffs.shape}, incidence {inc.shape}")

    numba_impl = None
    try:
        numba_impl = _kernels._build_numba_impl()
    except ImportError:
        print("numba not importable; benchmarking numpy only")
    numpy_impl = _kernels._NumpyImpl

    # rank workload: tour incidence differences for K_7
    tours7 = enumerate_tours(7)
    inc7 = tours_incidence_matrix(tours7)
    diffs = (inc7[1:] - inc7[0]).astype(np.int64)

    if numba_impl is not None:
        # trigger JIT compilation outside the timed region
        numba_impl.min_slack(coeffs[:2], rhs[:2], inc)
        numba_impl.slack_block(coeffs[:2], rhs[:2], inc)
        numba_impl.bareiss_rank(diffs[:10])

    rows = []
    for name, fn in [
        ("min_slack", lambda impl: impl.min_slack(coeffs, rhs, inc)),
        ("slack_block", lambda impl: impl.slack_block(coeffs, rhs, inc)),
        ("bareiss_rank", lambda impl: impl.bareiss_rank(diffs)),
    ]:
        t_np, r_np = timeit(lambda: fn(numpy_impl))
        if numba_impl is not None:
            t_nb, r_nb = timeit(lambda: fn(numba_impl))
            if name == "bareiss_rank":
                assert r_np == r_nb, (r_np, r_nb)
            else:
                assert np.array_equal(r_np[0] if isinstance(r_np, tuple) else r_np,
                                      r_nb[0] if isinstance(r_nb, tuple) else r_nb)
            rows.append((name, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((name, t_np, None, None))

    print()
    print(f"{'kernel':<14} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for name, t_np, t_nb, speedup in rows:
        nb = f"{t_nb:12.4f}" if t_nb is not None else f"{'-':>12}"
        sp = f"{speedup:8.2f}x" if speedup is not None else f"{'-':>9}"
        print(f"{name:<14} {t_np:12.4f} {nb} {sp}")


if __name__ == "__main__":
    main()
