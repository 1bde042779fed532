#!/usr/bin/env python3
"""
Compare the numba and numpy reduction backends.

Times the per-block error kernel on its own and a full 10^6-trial hybrid
simulation under each backend. Numba compilation is excluded by a warm-up call.

    python benchmarks/bench_backends.py [--trials N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from securehda import _kernels
from securehda.model import MismatchPoint, fig4_params
from securehda.montecarlo import SimulationConfig, simulate_hybrid


def kernel_case(n):
    rng = np.random.default_rng(0)
    obs = rng.standard_normal((3, n))
    target = obs.T @ np.array([1.1, 0.5, -1.0]) + rng.standard_normal(n)
    return target, obs, np.array([1.0, 0.5, -1.0])


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    case = kernel_case(args.trials)
    params, point = fig4_params(), MismatchPoint(0.2)
    cfg = SimulationConfig(trials=args.trials, seed=0)

    print(f"{'backend':<8} {'kernel [ms]':>12} {'simulate [ms]':>14} {'empirical_d':>14}")
    prev = _kernels.BACKEND
    try:
        for name in backends:
            _kernels.set_backend(name)
            _kernels.error_stats(*case)  # warm-up / compile
            k = min(timeit.repeat(lambda: _kernels.error_stats(*case), number=1, repeat=args.repeat))
            s = min(timeit.repeat(lambda: simulate_hybrid(params, point, cfg), number=1, repeat=args.repeat))
            d = simulate_hybrid(params, point, cfg).empirical_d
            print(f"{name:<8} {1e3 * k:>12.2f} {1e3 * s:>14.2f} {d:>14.10f}")
    finally:
        _kernels.set_backend(prev)


if __name__ == "__main__":
    main()
