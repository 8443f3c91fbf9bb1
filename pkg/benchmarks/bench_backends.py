"""Benchmark the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py [--quick]

Both backends produce bit-identical output for a fixed seed, so the timings
compare like for like.
"""

import argparse
import time

import numpy as np

from satgeo._core import load_backend
from satgeo._rng import WordStream


def time_strip(impl, n, k, r, trials, seed=0):
    best = float("inf")
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        m = int(rng.binomial(int(round(r * n)), k / (2 ** k - 1)))
        red = rng.integers(0, n, size=m, dtype=np.int64)
        blue = rng.integers(0, n, size=m * (k - 1), dtype=np.int64)
        t0 = time.perf_counter()
        impl.strip_original(n, k, red, blue, WordStream(rng), 0)
        best = min(best, time.perf_counter() - t0)
    return best, m


def time_enum(impl, n, m, k, trials, seed=0):
    rng = np.random.default_rng(seed)
    cv = np.empty((m, k), dtype=np.int64)
    for c in range(m):
        cv[c] = rng.choice(n, size=k, replace=False)
    cs = rng.integers(0, 2, size=(m, k)).astype(bool)
    best = float("inf")
    for _ in range(trials):
        t0 = time.perf_counter()
        impl.mark_solutions(n, cv, cs)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller sizes (pure backend at full size is slow)")
    args = ap.parse_args()

    backends = {}
    for name in ("compiled", "fallback"):
        try:
            backends[name] = load_backend(name)
        except ImportError:
            print(f"{name}: not available")
    if args.quick:
        strip_cfg = dict(n=10_000, k=3, r=6.0, trials=3)
        enum_cfg = dict(n=16, m=60, k=3, trials=3)
    else:
        strip_cfg = dict(n=100_000, k=3, r=6.0, trials=3)
        enum_cfg = dict(n=22, m=90, k=3, trials=3)

    print(f"{'kernel':<28}{'backend':<12}{'time':>12}")
    results = {}
    for name, impl in backends.items():
        dt, m = time_strip(impl, **strip_cfg)
        results[("strip", name)] = dt
        print(f"{'strip_original n=%d' % strip_cfg['n']:<28}{name:<12}{dt * 1e3:>10.1f}ms")
    for name, impl in backends.items():
        dt = time_enum(impl, **enum_cfg)
        results[("enum", name)] = dt
        print(f"{'mark_solutions n=%d' % enum_cfg['n']:<28}{name:<12}{dt * 1e3:>10.1f}ms")
    for kernel in ("strip", "enum"):
        if (kernel, "compiled") in results and (kernel, "fallback") in results:
            speedup = results[(kernel, "fallback")] / results[(kernel, "compiled")]
            print(f"{kernel}: compiled is {speedup:.0f}x faster")


if __name__ == "__main__":
    main()
