"""Time the numba and numpy kernel paths on the same inputs.

    python3 benchmarks/bench_kernels.py [--d 2 --n 16 --repeat 5]

The first numba call is timed separately so JIT compilation does not skew
the steady-state numbers. Outputs of the two paths are compared as well.
"""
import argparse
import timeit

import numpy as np

from nsghz import kernels


def cases(d, n, rng):
    op, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    table = rng.uniform(0, d, d ** 3)
    powers = np.stack([np.linalg.matrix_power(op, k) for k in range(d ** 2 * (d - 1) ** 2 + 1)])
    return {
        "apply_local": lambda amps, b: kernels.apply_local(amps, d, n, n // 2, op, backend=b),
        "apply_phase_product": lambda amps, b: kernels.apply_phase_product(
            amps, d, n, [0, 1, n - 1], 0.37, backend=b),
        "apply_phase_table": lambda amps, b: kernels.apply_phase_table(
            amps, d, n, [0, n // 2, n - 1], table, backend=b),
        "apply_controlled": lambda amps, b: kernels.apply_controlled(
            amps, d, n, [1, 2], 0, powers, backend=b),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--n", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    amps = rng.standard_normal(args.d ** args.n) + 1j * rng.standard_normal(args.d ** args.n)
    amps /= np.linalg.norm(amps)
    backends = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])
    print(f"d={args.d} n={args.n} dim={amps.size} backends={','.join(backends)}")
    print(f"{'kernel':22s} {'backend':8s} {'first (ms)':>11s} {'best (ms)':>10s} {'max diff':>9s}")
    for name, fn in cases(args.d, args.n, rng).items():
        ref = fn(amps, "numpy")
        for b in backends:
            t0 = timeit.default_timer()
            out = fn(amps, b)
            first = timeit.default_timer() - t0
            best = min(timeit.repeat(lambda: fn(amps, b), number=1, repeat=args.repeat))
            diff = float(np.max(np.abs(out - ref)))
            print(f"{name:22s} {b:8s} {1e3 * first:11.2f} {1e3 * best:10.2f} {diff:9.1e}")
    if len(backends) == 1:
        print("numba not importable or disabled; only the numpy path was timed")


if __name__ == "__main__":
    main()
