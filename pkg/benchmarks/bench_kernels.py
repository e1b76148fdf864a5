"""Benchmark the compiled kernels against the pure numpy fallback.

Run with:  python3 benchmarks/bench_kernels.py [--size N] [--repeats R]
"""

import argparse
import importlib
import time

import numpy as np


def _load_backends():
    backends = {}
    try:
        backends["cython"] = importlib.import_module("modfold._kernels")
    except ImportError:
        pass
    backends["numpy"] = importlib.import_module("modfold._kernels_py")
    return backends


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=2 ** 20,
                        help="sample count for fold/quantize benchmarks")
    parser.add_argument("--nlms-size", type=int, default=2 ** 14,
                        help="sample count for the NLMS benchmark")
    parser.add_argument("--repeats", type=int, default=5,
                        help="repetitions per case (best time reported)")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.uniform(-20, 20, args.size)
    ref = (rng.standard_normal(args.nlms_size)
           + 1j * rng.standard_normal(args.nlms_size))
    rx = 2.0 * np.roll(ref, 5)

    backends = _load_backends()
    cases = {
        "modulo_fold": lambda mod: mod.modulo_fold(x, 1.0),
        "quantize_midrise": lambda mod: mod.quantize_midrise(x, 0.125, 16),
        "nlms(order=32)": lambda mod: mod.nlms(ref, rx, 32, 0.5, 1e-6),
    }

    print(f"{'kernel':<18} " + " ".join(f"{n:>12}" for n in backends)
          + ("      speedup" if len(backends) > 1 else ""))
    for name, case in cases.items():
        times = {n: _time(lambda m=mod: case(m), args.repeats)
                 for n, mod in backends.items()}
        row = f"{name:<18} " + " ".join(f"{t * 1e3:>10.2f}ms"
                                        for t in times.values())
        if "cython" in times:
            row += f"   {times['numpy'] / times['cython']:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
