"""
Compare the compiled and pure-Python kernel backends on sweep-sized batches.

Run with ``python benchmarks/bench_kernels.py [--points N] [--repeat R]``.
"""

import argparse
import timeit

import numpy as np

from dqdcool import _kernels_py

try:
    from dqdcool import _kernels
except ImportError:  # extension not built
    _kernels = None


def make_inputs(points, seed=0):
    rng = np.random.default_rng(seed)
    G = 10 ** rng.uniform(-2, 4, points)
    kappa = 10 ** rng.uniform(-2, 4, points)
    g1 = 10 ** rng.uniform(-2, 4, points)
    pth = rng.uniform(0, 0.45, points)
    nbar = 10 ** rng.uniform(-3, 1.5, points)
    f = rng.uniform(0.05, 1.0, points)
    return G, kappa, g1, pth, nbar, f


CASES = {
    "clamped_batch": lambda m, a: m.clamped_batch(a[1], a[4], a[0], a[3], 1 - a[3]),
    "persistent_batch": lambda m, a: m.persistent_batch(a[0], a[1], a[2], a[3], a[4]),
    "filtered_batch": lambda m, a: m.filtered_batch(a[0], a[1], a[2], a[3], a[4], a[5]),
    "two_emitter_batch": lambda m, a: m.two_emitter_batch(a[0], 0.5 * a[0], a[2], 2 * a[2],
                                                          a[3], 0.5 * a[3], a[1], a[4]),
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--points", type=int, default=20000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    a = make_inputs(args.points)
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':<20}" + "".join(f"{b:>14}" for b, _ in backends) + f"{'speedup':>10}"
          + f"{'max |diff|':>14}")
    for name, fn in CASES.items():
        times, outs = [], []
        for _, mod in backends:
            out = fn(mod, a)
            outs.append(np.asarray(out[0] if isinstance(out, tuple) else out))
            times.append(min(timeit.repeat(lambda: fn(mod, a), number=1, repeat=args.repeat)))
        row = f"{name:<20}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times)
        if len(times) == 2:
            diff = np.nanmax(np.abs(outs[0] - outs[1]) / np.maximum(np.abs(outs[0]), 1e-300))
            row += f"{times[0] / times[1]:>9.1f}x{diff:>14.2e}"
        print(row)
    if _kernels is None:
        print("compiled extension not available; only the Python backend was timed")


if __name__ == "__main__":
    main()
