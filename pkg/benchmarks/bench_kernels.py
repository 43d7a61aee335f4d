"""Compare the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from swarmconn import kernels
from swarmconn.kernels import _pyimpl

try:
    from swarmconn.kernels import _speedups
except ImportError:
    _speedups = None


def bench(fn, args, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    m, count = 2, 6
    rel = [float(v) for v in rng.uniform(-15, 15, size=m * count)]
    dx2 = [float(v) for v in rng.uniform(0, 1, size=count)]
    ws = [float(v) for v in rng.uniform(0, 1, size=count)]
    xs = [float(v) for v in rng.uniform(-1, 1, size=count)]

    cases = [
        ("lj_sum", (rel, m, 4.0, 2.0, 16.0, 10.0, 0.01)),
        ("conn_grad", (rel, dx2, m, 16.0 / 3.0, 16.0, 0.01)),
        ("lap_row", (0.3, ws, xs)),
        ("lj_force_scalar", (12.0, 4.0, 2.0, 16.0, 10.0)),
    ]

    print(f"active backend: {kernels.BACKEND}  (repeat={args.repeat})")
    print(f"{'kernel':<16} {'python us':>10} {'compiled us':>12} {'speedup':>8}")
    for name, a in cases:
        t_py = bench(getattr(_pyimpl, name), a, args.repeat) * 1e6
        if _speedups is None:
            print(f"{name:<16} {t_py:>10.3f} {'n/a':>12} {'n/a':>8}")
            continue
        t_c = bench(getattr(_speedups, name), a, args.repeat) * 1e6
        print(f"{name:<16} {t_py:>10.3f} {t_c:>12.3f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
