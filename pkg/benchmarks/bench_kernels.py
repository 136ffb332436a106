"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each case is run on both backends; the table reports the best wall time and
the speed-up, and the outputs are compared so a faster but wrong kernel shows up.
"""
import argparse
import timeit

import numpy as np

from atomcavity import kernels


def cases(rng):
    k = 2 * np.pi / 780e-9
    small = rng.random((10_000, 50, 3)) * 7.8e-6
    large = rng.random((200, 5_000, 3)) * 7.8e-6
    q = k * np.array([1.0, 0.0, -1.0])
    d = np.linspace(-20, 20, 400_001)
    return {
        "F, 10^4 layouts x 50 atoms": lambda b: kernels.phase_sum_batch(small, q, backend=b),
        "F, 200 layouts x 5000 atoms": lambda b: kernels.phase_sum_batch(large, q, backend=b),
        "G,H, 10^4 layouts x 50 atoms": lambda b: kernels.cavity_sums_batch(small, k, backend=b),
        "spectra, 4e5 detunings": lambda b: kernels.cavity_spectra(d, d, 10.0, 10.0, 1.0, 1.0, backend=b),
    }


def _max_diff(a, b):
    if isinstance(a, tuple):
        return max(_max_diff(x, y) for x, y in zip(a, b))
    return float(np.max(np.abs(a - b)))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if "cython" not in kernels.BACKENDS:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(0)
    print(f"{'case':<30} {'python [ms]':>12} {'cython [ms]':>12} {'speed-up':>9} {'max |diff|':>11}")
    for name, fn in cases(rng).items():
        times = {}
        for backend in ("python", "cython"):
            times[backend] = min(timeit.repeat(lambda: fn(backend), number=1, repeat=args.repeat))
        diff = _max_diff(fn("python"), fn("cython"))
        print(
            f"{name:<30} {1e3 * times['python']:>12.2f} {1e3 * times['cython']:>12.2f} "
            f"{times['python'] / times['cython']:>8.1f}x {diff:>11.1e}"
        )


if __name__ == "__main__":
    main()
