"""Hot numeric kernels with an optional numba fast path.

Every kernel is written once as a plain numpy function (the ``*_py``
reference) and compiled with ``numba.njit`` when available.  Setting the
environment variable ``CAVITY_BLOCH_NUMBA=0`` before import forces the pure
numpy path; ``benchmarks/bench_kernels.py`` times both.
"""

import math
import os

import numpy as np

_env = os.environ.get("CAVITY_BLOCH_NUMBA", "1").strip().lower()
_want_numba = _env not in ("0", "false", "off", "no")

if _want_numba:
    try:
        import numba as _nb

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAS_NUMBA = False
else:
    HAS_NUMBA = False


def _jit(func):
    if HAS_NUMBA:
        return _nb.njit(cache=True)(func)
    return func


def laguerre_table_py(j_count, a_count, x):
    """Associated Laguerre values L_j^{(a)}(x) for 0 <= j < j_count, 0 <= a < a_count.

    Upward three-term recurrence in j, vectorized over the integer order a:
    (j+1) L_{j+1}^{(a)} = (2j + a + 1 - x) L_j^{(a)} - (j + a) L_{j-1}^{(a)}.
    """
    a = np.arange(a_count).astype(np.float64)
    out = np.empty((j_count, a_count), dtype=np.float64)
    out[0, :] = 1.0
    if j_count > 1:
        out[1, :] = 1.0 + a - x
    for j in range(1, j_count - 1):
        out[j + 1, :] = ((2.0 * j + a + 1.0 - x) * out[j, :] - (j + a) * out[j - 1, :]) / (j + 1.0)
    return out


laguerre_table = _jit(laguerre_table_py)


def displacement_block_py(dim, alpha):
    """Fock-basis matrix of the coherent displacement operator, truncated to dim.

    Lower triangle (row i >= col j):
        sqrt(j!/i!) * alpha^(i-j) * exp(-|alpha|^2/2) * L_j^{(i-j)}(|alpha|^2),
    upper triangle from D^dagger(alpha) = D(-alpha):
        D[i, j] = (-1)^(j-i) * conj(D[j, i]).
    Factorial ratios go through lgamma so levels up to a few hundred are safe.
    """
    x = (alpha * np.conj(alpha)).real
    lag = laguerre_table(dim, dim, x)
    pref = math.exp(-0.5 * x)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for j in range(dim):
        apow = 1.0 + 0.0j
        for i in range(j, dim):
            d = i - j
            ratio = math.exp(0.5 * (math.lgamma(j + 1.0) - math.lgamma(i + 1.0)))
            val = ratio * apow * pref * lag[j, d]
            out[i, j] = val
            if i != j:
                sign = -1.0 if (d % 2) else 1.0
                out[j, i] = sign * np.conj(val)
            apow = apow * alpha
    return out


def fill_coupling_py(mat, n_count, j_count, dn, phases, block):
    """Accumulate one Fourier coupling into a (n, level)-indexed matrix.

    mat is (n_count*j_count, n_count*j_count), row-major in (n, level).
    For every row index n with a valid column n' = n - dn, add
    phases[n] * block[i, j] at ((n, i), (n', j)).
    """
    for n in range(n_count):
        npr = n - dn
        if npr < 0 or npr >= n_count:
            continue
        ph = phases[n]
        for i in range(j_count):
            for j in range(j_count):
                mat[n * j_count + i, npr * j_count + j] += ph * block[i, j]
    return mat


def lorentzian_comb_py(energies, centers, eta):
    """Sum of unit-area Lorentzians centered at `centers`, evaluated on `energies`."""
    out = np.zeros_like(energies)
    for c in centers:
        out += (eta / math.pi) / ((energies - c) ** 2 + eta**2)
    return out


displacement_block = _jit(displacement_block_py)
fill_coupling = _jit(fill_coupling_py)
lorentzian_comb = _jit(lorentzian_comb_py)
