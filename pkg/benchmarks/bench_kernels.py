#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py
The numba path honors CAVITY_BLOCH_NUMBA; the fallback is always the
undecorated ``*_py`` reference of the same function.
"""

import time

import numpy as np

from cavity_bloch import kernels


def timeit(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rows = []

    alpha = 0.31 + 0.22j
    rows.append(
        (
            "displacement_block(dim=64)",
            timeit(kernels.displacement_block_py, 64, alpha),
            timeit(kernels.displacement_block, 64, alpha),
        )
    )

    energies = np.linspace(0.0, 1.0, 20001)
    centers = np.linspace(0.05, 0.95, 64)
    rows.append(
        (
            "lorentzian_comb(20001 x 64)",
            timeit(kernels.lorentzian_comb_py, energies, centers, 1e-3),
            timeit(kernels.lorentzian_comb, energies, centers, 1e-3),
        )
    )

    n_count, j_count = 61, 3
    dim = n_count * j_count
    phases = np.exp(1j * np.linspace(0.0, 6.0, n_count))
    block = (np.arange(j_count * j_count, dtype=float) + 1j).reshape(j_count, j_count)

    def fill_py():
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for dn in (-1, 0, 1):
            kernels.fill_coupling_py(mat, n_count, j_count, dn, phases, block)
        return mat

    def fill_nb():
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for dn in (-1, 0, 1):
            kernels.fill_coupling(mat, n_count, j_count, dn, phases, block)
        return mat

    rows.append(("fill_coupling(61x3 basis, 3 stars)", timeit(fill_py), timeit(fill_nb)))

    print(f"numba active: {kernels.HAS_NUMBA}")
    print(f"{'kernel':40s} {'numpy [ms]':>12s} {'selected [ms]':>14s} {'speedup':>8s}")
    for name, t_py, t_sel in rows:
        speed = t_py / t_sel if t_sel > 0 else float("inf")
        print(f"{name:40s} {t_py * 1e3:12.3f} {t_sel * 1e3:14.3f} {speed:8.1f}x")


if __name__ == "__main__":
    main()
