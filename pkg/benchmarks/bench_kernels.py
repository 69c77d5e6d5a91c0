"""Compare the compiled and pure-Python fixed-point kernels.

    python3 benchmarks/bench_kernels.py [--sizes 1e4 1e5 1e6]
"""

import argparse
import math
import time

from twocover import _kernels_py, kernels


def workload(order: int):
    """Group Z/a + Z/b with a | b and a near sqrt(order), action x -> -x."""
    a = 2
    while a * a * 4 <= order:
        a *= 2
    b = max(a, (order // a) // a * a)
    moduli = [a, b]
    delta = [[(-2) % a, 0], [0, (-2) % b]]
    return moduli, delta


def timed(fn, *args, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", nargs="+", type=float, default=[1e4, 1e5, 1e6])
    args = ap.parse_args()
    compiled = kernels.count_fixed_points if kernels.BACKEND == "cython" else None
    print(f"{'|Phi|':>10} {'python s':>10} {'compiled s':>11} {'speedup':>8}  fixed")
    for size in args.sizes:
        moduli, delta = workload(int(size))
        order = moduli[0] * moduli[1]
        tp, n_py = timed(_kernels_py.count_fixed_points, moduli, delta, repeat=1)
        if compiled is None:
            print(f"{order:>10} {tp:>10.4f} {'-':>11} {'-':>8}  {n_py}")
            continue
        tc, n_c = timed(compiled, moduli, delta)
        assert n_c == n_py
        print(f"{order:>10} {tp:>10.4f} {tc:>11.5f} {tp / tc:>7.0f}x  {n_c}")


if __name__ == "__main__":
    main()
