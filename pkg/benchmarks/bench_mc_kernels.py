"""Compare the compiled Monte Carlo accumulators with the numpy fallback.

    python3 benchmarks/bench_mc_kernels.py [--samples N] [--repeat R]

Both backends consume identical sample blocks; the script reports the best
wall time per accumulator and the relative difference of the sums.
"""
import argparse
import time

import numpy as np

from dhl_omega import _mc_py

try:
    from dhl_omega import _mc_core
except ImportError:  # pragma: no cover
    _mc_core = None


def _cases(n, k, rng):
    pts = np.ascontiguousarray(rng.random((n, k)))
    ti2 = np.ascontiguousarray(rng.random(n))
    y = np.ascontiguousarray(1e-6 + rng.random(n) * (4 - 1e-6))
    coeffs = np.ascontiguousarray([1.0, -2.0, 3.0, 1.0])
    inf = np.inf
    return {
        "volume": lambda m: m.acc_volume(pts, inf, 1.0),
        "I": lambda m: m.acc_I(pts, coeffs, inf, 1.0),
        "J": lambda m: m.acc_J(pts, ti2, 0, coeffs, inf, 1.0, inf),
        "Q": lambda m: m.acc_Q(pts, y, 0, coeffs, inf, 1.0, 0.25, 4.0, inf, inf, inf),
        "Q-eps": lambda m: m.acc_Q(pts * 1.2, y, 0, coeffs, 1.2, 1.2, 0.5, 4.0, 2.0, 1.2, 0.8),
    }


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1 << 20)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _mc_core is None:
        print("compiled kernels are not built; only the numpy fallback is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"samples={args.samples} k={args.k} repeat={args.repeat}")
    print(f"{'kernel':8s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s} {'rel diff':>10s}")
    for name, run in _cases(args.samples, args.k, rng).items():
        t_py, r_py = _best(lambda: run(_mc_py), args.repeat)
        t_cy, r_cy = _best(lambda: run(_mc_core), args.repeat)
        rel = abs(r_py[0] - r_cy[0]) / max(abs(r_py[0]), 1e-300)
        print(f"{name:8s} {t_py * 1e3:11.2f} {t_cy * 1e3:12.2f} {t_py / t_cy:8.1f} {rel:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
