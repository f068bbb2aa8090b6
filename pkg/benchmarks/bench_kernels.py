"""Compiled vs NumPy kernels, and the GaRo solver end to end.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from dyadicri import _kernels
from dyadicri.generators import gen_random
from dyadicri.grid import Grid
from dyadicri.packing import garo_norm_dyadic


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _kernels.python_backend}
    if _kernels.compiled_backend is not None:
        backends["compiled"] = _kernels.compiled_backend
    else:
        print("compiled kernels not built; timing the NumPy fallback only")

    rng = np.random.default_rng(0)
    cases = {
        "maxplus_conv 64 x (65, 65)": ("maxplus_conv", (rng.random((64, 65)), rng.random((64, 65)))),
        "maxplus_conv 4 x (1025, 1025)": ("maxplus_conv", (rng.random((4, 1025)), rng.random((4, 1025)))),
        "compensated_cumsum 1e5": ("compensated_cumsum", (rng.random(100_000),)),
        "sorted_pair_sums 256 x 64": ("sorted_pair_sums", (np.sort(rng.random((256, 64)), axis=1),)),
    }
    print(f"{'kernel':34s}" + "".join(f"{k:>12s}" for k in backends) + "     speedup")
    for label, (name, data) in cases.items():
        times = {k: best_of(lambda b=b: getattr(b, name)(*data), args.repeat) for k, b in backends.items()}
        row = f"{label:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if "compiled" in times:
            row += f"  {times['python'] / times['compiled']:9.1f}x"
        print(row)

    print()
    for dim, level in ((1, 8), (2, 4), (2, 5)):
        f = gen_random(0, Grid(dim, level), "heavy-tail")
        times = {k: best_of(lambda b=b: garo_norm_dyadic(f, 2.0, kernels=b), max(1, args.repeat // 2))
                 for k, b in backends.items()}
        row = f"{f'garo_norm_dyadic n={dim} L={level}':34s}" + "".join(f"{t * 1e3:10.1f}ms" for t in times.values())
        if "compiled" in times:
            row += f"  {times['python'] / times['compiled']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
