"""Benchmark the master-equation kernel: compiled extension vs numpy fallback.

Times repeated right-hand-side evaluations on representative basis sizes and
reports per-call latency, speedup, and the max absolute difference between
the two implementations on the same random input.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from trimerep._kernels import KERNEL_KIND, make_rhs, make_rhs_numpy
from trimerep.fock import random_core_state

PARAMS = (1.0, 2.0, 0.25, 1.0, 0.0, 0.0)  # gamma, delta, j, omega, delta_a, delta_c
CASES = (
    ((3, 4, 3), 400),
    ((4, 6, 4), 200),
    ((6, 8, 6), 60),
    ((8, 10, 8), 20),
)


def time_kernel(rhs, state: np.ndarray, repeats: int) -> float:
    out = np.empty_like(state)
    rhs(state, out)  # warm-up (also first-call allocation/conversion)
    best = np.inf
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(repeats):
            rhs(state, out)
        best = min(best, (time.perf_counter() - start) / repeats)
    return best


def main() -> None:
    if KERNEL_KIND != "compiled":
        print("compiled extension not available; timing the numpy kernel only")
    print(f"{'cutoffs':>12} {'dim':>6} {'numpy ms':>10} {'compiled ms':>12} "
          f"{'speedup':>8} {'max diff':>10}")
    for cutoffs, repeats in CASES:
        dims = tuple(c + 1 for c in cutoffs)
        state = random_core_state(cutoffs, seed=1).tensor
        slow = make_rhs_numpy(dims, *PARAMS)
        t_np = time_kernel(slow, state, repeats)
        if KERNEL_KIND == "compiled":
            fast = make_rhs(dims, *PARAMS)
            t_cy = time_kernel(fast, state, repeats)
            diff = float(
                np.max(
                    np.abs(
                        fast(state, np.empty_like(state))
                        - slow(state, np.empty_like(state))
                    )
                )
            )
            print(
                f"{str(cutoffs):>12} {dims[0] * dims[1] * dims[2]:>6} "
                f"{t_np * 1e3:>10.3f} {t_cy * 1e3:>12.3f} "
                f"{t_np / t_cy:>7.1f}x {diff:>10.2e}"
            )
        else:
            print(
                f"{str(cutoffs):>12} {dims[0] * dims[1] * dims[2]:>6} "
                f"{t_np * 1e3:>10.3f} {'-':>12} {'-':>8} {'-':>10}"
            )


if __name__ == "__main__":
    main()
