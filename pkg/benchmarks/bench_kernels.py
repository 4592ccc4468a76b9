"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once (compilation excluded), then timed with
timeit; the table reports the best run and the max abs difference between
the two paths.
"""

import argparse
import timeit

import numpy as np

from blochkit import _kernels as K


def cases(rng):
    z = 0.999 * np.sqrt(rng.uniform(size=200_000)) * np.exp(2j * np.pi * rng.uniform(size=200_000))
    dz = rng.normal(size=z.size) + 1j * rng.normal(size=z.size)
    a = rng.normal(size=4097) + 1j * rng.normal(size=4097)
    b = rng.normal(size=4097) + 1j * rng.normal(size=4097)
    coeffs = rng.normal(size=64) + 1j * rng.normal(size=64)
    lam = rng.normal(size=16) + 1j * rng.normal(size=16)
    return [
        ("dual_pow n=200, 2e5 pts", K.dual_pow_numpy, K.dual_pow_jit, (z, dz, 200)),
        ("truncated_convolve 4097", K.truncated_convolve_numpy, K.truncated_convolve_jit, (a, b, 4097)),
        ("horner_dual deg 63, 2e5 pts", K.horner_dual_numpy, K.horner_dual_jit, (coeffs, z)),
        ("first_zero_subset k=16", K.first_zero_subset_numpy, K.first_zero_subset_jit, (lam, 1e-12)),
    ]


def max_diff(x, y):
    if isinstance(x, tuple):
        return max(max_diff(u, v) for u, v in zip(x, y))
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"numba available: {K.HAS_NUMBA}, default path: {'jit' if K.USE_JIT else 'numpy'}")
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'jit [ms]':>10s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, f_np, f_jit, args_ in cases(rng):
        diff = max_diff(f_np(*args_), f_jit(*args_))
        t_np = min(timeit.repeat(lambda: f_np(*args_), number=1, repeat=args.repeat))
        t_jit = min(timeit.repeat(lambda: f_jit(*args_), number=1, repeat=args.repeat))
        print(f"{name:32s} {1e3 * t_np:11.2f} {1e3 * t_jit:10.2f} {t_np / t_jit:8.1f} {diff:11.3g}")


if __name__ == "__main__":
    main()
