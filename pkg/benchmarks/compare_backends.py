#!/usr/bin/env python3
"""Time the numba and numpy compute backends on the package's two hot paths.

Workloads:
  * exhaustive permutation search over all n! service orders
  * Monte Carlo counting of all-stages-positive trials

Each workload runs on every available backend; the script asserts that the
backends return bit-identical results before reporting timings.

Usage:
    python3 benchmarks/compare_backends.py [--items N] [--trials T] [--repeats R]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from decaysched import (
    AdditiveDecay,
    Objective,
    PopulationModel,
    available_backends,
    brute_force_optimal,
    get_backend,
    prob_positive_montecarlo,
    set_backend,
)


def time_call(fn, repeats: int) -> tuple[float, object]:
    """Best-of-`repeats` wall time and the (identical) return value."""
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--items", type=int, default=9,
                        help="items for the permutation search (default: 9, i.e. 362880 orders)")
    parser.add_argument("--trials", type=int, default=2_000_000,
                        help="Monte Carlo trials (default: 2000000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats per workload; best is reported (default: 3)")
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    p0 = np.sort(rng.uniform(0.3, 1.0, size=args.items))[::-1].copy()
    decay = AdditiveDecay.linear(0.05, args.items)
    model = PopulationModel(n=13, low=0.5, high=1.0, decay_step=0.06)

    workloads = {
        f"brute force search (n={args.items})": lambda: brute_force_optimal(
            p0, decay, Objective.PROB_ALL_SUCCESS
        ),
        f"monte carlo positivity ({args.trials} trials)": lambda: prob_positive_montecarlo(
            model, "ascending", args.trials, seed=11
        ),
    }

    backends = available_backends()
    original = get_backend()
    print(f"backends: {', '.join(backends)}")
    print(f"repeats per timing: {args.repeats} (best shown)\n")

    rows = []
    try:
        for label, fn in workloads.items():
            timings = {}
            results = {}
            for backend in backends:
                set_backend(backend)
                fn()  # warm up (JIT compilation, allocator)
                timings[backend], results[backend] = time_call(fn, args.repeats)
            baseline = results[backends[0]]
            for backend in backends[1:]:
                got = results[backend]
                if isinstance(baseline, tuple) and hasattr(baseline[0], "shape"):
                    matches = np.array_equal(baseline[0], got[0]) and baseline[1] == got[1]
                else:
                    matches = baseline == got
                assert matches, f"{backend} disagrees with {backends[0]} on {label}"
            rows.append((label, timings))
    finally:
        set_backend(original)

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}" + "".join(f"  {b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, timings in rows:
        line = f"{label:<{width}}"
        for backend in backends:
            line += f"  {timings[backend] * 1e3:>10.2f}ms"
        if len(backends) > 1:
            ratio = timings[backends[-1]] / timings[backends[0]]
            line += f"  {ratio:>8.2f}x"
        print(line)
    if len(backends) > 1:
        print(f"\nspeedup = {backends[-1]} time / {backends[0]} time "
              f"(higher means {backends[0]} is faster)")
    print("results verified identical across backends")


if __name__ == "__main__":
    main()
