"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--side 256] [--repeat 5]
"""

import argparse
import sys
import timeit

import numpy as np

from panfuse import kernels
from panfuse.stats import gaussian_kernel


def cases(side: int):
    g = np.random.default_rng(0)
    img = g.normal(size=(side, side))
    mov = np.roll(img, (1, 2), axis=(0, 1))
    k5 = gaussian_kernel(1.0)
    k11 = gaussian_kernel(1.5, 5)
    return {
        "seq_sum": lambda b: b.seq_sum(img),
        "conv_same": lambda b: b.conv_same(img, k5),
        "conv_valid": lambda b: b.conv_valid(img, k11),
        "haar_fwd": lambda b: b.haar_fwd(img),
        "sobel_mag": lambda b: b.sobel_mag(img),
        "ncc_scores": lambda b: b.ncc_scores(img, mov, 4),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--side", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    py, cx = kernels.python_backend, kernels.compiled_backend
    if cx is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"side={args.side} repeat={args.repeat} (best of, milliseconds)")
    print(f"{'kernel':<12}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for name, fn in cases(args.side).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        t_cx = min(timeit.repeat(lambda: fn(cx), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<12}{t_py:>12.3f}{t_cx:>12.3f}{t_py / t_cx:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
