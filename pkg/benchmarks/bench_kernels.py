"""Time the compiled and numpy kernel backends on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--n 4096] [--points 2000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from smirnov import _kernels_py

try:
    from smirnov import _kernels as _compiled
except ImportError:
    _compiled = None


def cases(n, points, rng):
    g = np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    z = 0.9 * np.sqrt(rng.random(points)) * np.exp(2j * np.pi * rng.random(points))
    z = np.ascontiguousarray(z)
    zeros = np.ascontiguousarray(0.95 * np.sqrt(rng.random(64)) * np.exp(2j * np.pi * rng.random(64)))
    return {
        "trapezoid_sums": lambda m: m.trapezoid_sums(g, z),
        "step_sums": lambda m: m.step_sums(g, z),
        "blaschke_product": lambda m: m.blaschke_product(zeros, z),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096, help="grid size")
    ap.add_argument("--points", type=int, default=2000, help="evaluation points")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"n={args.n} points={args.points} best of {args.repeat}")
    print(f"{'kernel':<18}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max diff':>12}")
    for name, run in cases(args.n, args.points, rng).items():
        t_py = min(timeit.repeat(lambda: run(_kernels_py), number=1, repeat=args.repeat))
        if _compiled is None:
            print(f"{name:<18}{t_py:>12.4f}{'n/a':>12}{'':>10}{'':>12}")
            continue
        t_cy = min(timeit.repeat(lambda: run(_compiled), number=1, repeat=args.repeat))
        a, b = run(_kernels_py), run(_compiled)
        a, b = (a, b) if isinstance(a, tuple) else ((a,), (b,))
        diff = max(float(np.max(np.abs(x - y))) for x, y in zip(a, b))
        print(f"{name:<18}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
