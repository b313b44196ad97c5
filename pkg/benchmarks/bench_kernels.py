"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --size 5 --repeat 5
"""
import argparse
import timeit

import numpy as np

from tropcap import _pycore
from tropcap.functionals import random_function_rows

try:
    from tropcap import _core
except ImportError:
    _core = None


def cases(n, rows, rng):
    raw = rng.random(1 << n)
    raw[0] = 0.0
    table = np.asarray(_pycore.monotone_closure(raw, n))
    table /= table[-1]
    batch = random_function_rows(rng, rows, n)
    phi = batch[0].copy()
    return {
        "maxplus (single)": lambda k: k.maxplus(table, phi),
        f"maxplus_batch ({rows} rows)": lambda k: k.maxplus_batch(table, batch),
        "maxplus_grid (step 1e-4)": lambda k: k.maxplus_grid(table, phi, 1e-4),
        "choquet": lambda k: k.choquet(table, phi),
        "monotone_closure": lambda k: k.monotone_closure(raw, n),
        "first_cover_violation": lambda k: k.first_cover_violation(table, n),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if _core is None:
        print("compiled extension not built; only the fallback can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'python (us)':>12s} {'cython (us)':>12s} {'speedup':>8s}")
    for name, fn in cases(args.size, args.rows, rng).items():
        timings = []
        for k in (_pycore, _core):
            if k is None:
                timings.append(float("nan"))
                continue
            t = timeit.Timer(lambda: fn(k))
            loops, _ = t.autorange()
            timings.append(min(t.repeat(args.repeat, loops)) / loops * 1e6)
        print(f"{name:32s} {timings[0]:12.1f} {timings[1]:12.1f} {timings[0] / timings[1]:8.1f}x")


if __name__ == "__main__":
    main()
