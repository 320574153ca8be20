"""Compare the numba and numpy kernel backends on large momentum grids.

    python3 benchmarks/bench_kernels.py --n 1000000 --repeat 5
"""

import argparse
import timeit

import numpy as np

from symplectic_mdr import _kernels as k

NAMES = ("energy_sq", "group_velocity", "inverse_velocity_excess", "velocity_excess")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="grid size")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sigma", type=float, default=-1.0)
    args = ap.parse_args()

    p = np.linspace(0.0, 0.3, args.n)
    m, l2, sigma = 0.0, 1.0, args.sigma
    print(f"grid n={args.n}, repeat={args.repeat}, numba available: {k.HAVE_NUMBA}")
    print(f"{'kernel':<26}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}{'max rel diff':>15}")
    for name in NAMES:
        f_np = getattr(k, name + "_np")
        t_np = min(timeit.repeat(lambda: f_np(p, m, l2, sigma), number=1, repeat=args.repeat))
        if not k.HAVE_NUMBA:
            print(f"{name:<26}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}{'-':>15}")
            continue
        f_nb = getattr(k, name + "_nb")
        f_nb(p[:4], m, l2, sigma)  # compile outside the timing
        t_nb = min(timeit.repeat(lambda: f_nb(p, m, l2, sigma), number=1, repeat=args.repeat))
        a, b = f_np(p, m, l2, sigma), f_nb(p, m, l2, sigma)
        nz = a != 0
        diff = float(np.max(np.abs(a[nz] - b[nz]) / np.abs(a[nz]))) if nz.any() else 0.0
        print(f"{name:<26}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.2f}{diff:>15.2e}")


if __name__ == "__main__":
    main()
