"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends run on identical integer grids and their outputs are
checked for equality before timing.
"""

import argparse
import random
import timeit
from fractions import Fraction as F

from chaosbound import _kernels_py
from chaosbound.covers import PlateauConfig, canonical_cover
from chaosbound.markov import _grid

try:
    from chaosbound import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None


def workload(n_holes=40, seed=1):
    rng = random.Random(seed)
    out = []
    for cls in "ABCD":
        cv = canonical_cover(cls)
        for _ in range(n_holes // 4):
            a = cv.a_M * F(rng.randrange(1, 1024), 1024)
            b = cv.b_M + (cv.b_m - cv.b_M) * F(rng.randrange(1, 1024), 1024)
            D, A, B, C = _grid(PlateauConfig(cv, a, b))
            out.append((D, cv.slope0, cv.icpt0, cv.slope1, cv.icpt1, A, B, C))
    return out


def run(impl, args, cyl_n):
    for g in args:
        budget = 10 * g[0] + 100
        impl.plateau_orbit_points(*g, budget)
        impl.open_orbit_points(*g, budget)
        impl.cylinder_counts(*g[:-1], cyl_n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--holes", type=int, default=40)
    ap.add_argument("--cylinders", type=int, default=14, help="word length for cylinder counts")
    opts = ap.parse_args()
    if compiled is None:
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    args = workload(opts.holes)
    for g in args:
        budget = 10 * g[0] + 100
        assert list(compiled.plateau_orbit_points(*g, budget)) == _kernels_py.plateau_orbit_points(*g, budget)
        assert list(compiled.cylinder_counts(*g[:-1], opts.cylinders)) == _kernels_py.cylinder_counts(
            *g[:-1], opts.cylinders
        )
    times = {}
    for name, impl in (("python", _kernels_py), ("cython", compiled)):
        times[name] = min(timeit.repeat(lambda: run(impl, args, opts.cylinders), number=1, repeat=opts.repeat))
        print(f"{name:>7}: {times[name] * 1e3:9.2f} ms  ({len(args)} holes)")
    print(f"speedup: {times['python'] / times['cython']:.1f}x")


if __name__ == "__main__":
    main()
