"""Compare the compiled fixed-point kernel against the pure-Python one.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Times the raw kernel on a range of problem sizes and the full
max-min SE / max-min EE solvers under each backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cellfree import SolverSettings, SystemConfig, max_min_ee, max_min_se
from cellfree.combining import InterferenceProfile
from cellfree.tpc import _backend


def make_profile(rng: np.random.Generator, K: int) -> InterferenceProfile:
    g = rng.uniform(0.05, 0.3, size=(K, K))
    np.fill_diagonal(g, rng.uniform(0.0, 0.02, size=K))
    return InterferenceProfile(g=g, n=rng.uniform(1.0, 2.0, size=K))


def time_call(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel(repeats: int) -> None:
    print("fixed-point kernel, best of %d (usec per call)" % repeats)
    print(f"{'K':>5} {'python':>12} {'cython':>12} {'speedup':>9}")
    backends = _backend.available()
    rng = np.random.default_rng(0)
    for K in (4, 8, 16, 32, 64):
        profile = make_profile(rng, K)
        g_off = profile.interference_matrix()
        n = profile.n
        # floors scaled so the fixed point stays interior at every K
        gamma = np.full(K, 1.0 / K)
        q = np.zeros(K)
        q_next = np.zeros(K)
        times = {}
        for name, mod in backends.items():
            def run(mod=mod):
                q[:] = 0.0
                mod.fp_min_power(g_off, n, gamma, 1.0, 1.0, 1e-10, 500,
                                 q, q_next)
            times[name] = time_call(run, repeats) * 1e6
        ratio = times["python"] / times["cython"] \
            if "cython" in times else float("nan")
        py = times["python"]
        cy = times.get("cython", float("nan"))
        print(f"{K:>5} {py:>12.1f} {cy:>12.1f} {ratio:>8.1f}x")


def bench_solvers(repeats: int) -> None:
    rng = np.random.default_rng(1)
    profile = make_profile(rng, 8)
    cfg = SystemConfig(M=64, K=8, target_se=0.05)
    settings = SolverSettings()
    names = list(_backend.available())
    print("\nsolvers on a K=8 profile, best of %d (msec per solve)" % repeats)
    print(f"{'solver':>12} " + " ".join(f"{n:>12}" for n in names))
    for label, fn in (
            ("max_min_se", lambda: max_min_se(profile, 1.0, 1.0, settings)),
            ("max_min_ee", lambda: max_min_ee(profile, 1.0, cfg, settings))):
        row = []
        for name in names:
            _backend.set_backend(name)
            row.append(time_call(fn, repeats) * 1e3)
        print(f"{label:>12} " + " ".join(f"{t:>12.3f}" for t in row))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()
    have = ", ".join(_backend.available())
    print(f"backends available: {have}")
    bench_kernel(args.repeats)
    bench_solvers(args.repeats)


if __name__ == "__main__":
    main()
