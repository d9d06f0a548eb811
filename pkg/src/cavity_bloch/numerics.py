"""Special functions and the dense Hermitian eigensolver contract.

All physics modules funnel their eigenproblems through
:func:`hermitian_eigvals` so determinism and Hermiticity policy live in one
place.
"""

import hashlib
import math

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError

#: relative Hermiticity tolerance accepted before symmetrization
HERMITICITY_RTOL = 1e-10


def laguerre_assoc(j, a, x):
    """Associated Laguerre polynomial L_j^(a)(x) by stable upward recurrence.

    Parameters
    ----------
    j : int
        Degree, j >= 0.
    a : int
        Integer order, a >= -j.
    x : float
        Argument, x >= 0.
    """
    if j < 0:
        raise DomainError(f"laguerre degree must be >= 0, got {j}")
    if x < 0.0 or not math.isfinite(x):
        raise DomainError(f"laguerre argument must be finite and >= 0, got {x}")
    if a < -j:
        raise DomainError(f"laguerre order must be >= -j = {-j}, got {a}")
    if a >= 0:
        table = kernels.laguerre_table(j + 1, a + 1, float(x))
        return float(table[j, a])
    # negative integer order: L_j^(-m)(x) = (-x)^m (j-m)!/j! L_{j-m}^{(m)}(x), m <= j
    m = -a
    table = kernels.laguerre_table(j - m + 1, m + 1, float(x))
    ratio = math.exp(math.lgamma(j - m + 1.0) - math.lgamma(j + 1.0))
    return float((-x) ** m * ratio * table[j - m, m])


def displacement_matrix_element(i, j, alpha):
    """Fock matrix element <i|D(alpha)|j> of the displacement operator."""
    if i < 0 or j < 0:
        raise DomainError("Fock indices must be >= 0")
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise DomainError("displacement amplitude must be finite")
    x = abs(alpha) ** 2
    if i >= j:
        ratio = math.exp(0.5 * (math.lgamma(j + 1.0) - math.lgamma(i + 1.0)))
        return ratio * alpha ** (i - j) * math.exp(-0.5 * x) * laguerre_assoc(j, i - j, x)
    return (-1.0) ** (j - i) * np.conj(displacement_matrix_element(j, i, alpha))


def displacement_matrix(dim, alpha):
    """Truncated dim x dim displacement matrix {<i|D(alpha)|j>}."""
    if dim < 1:
        raise DomainError("dimension must be >= 1")
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise DomainError("displacement amplitude must be finite")
    return kernels.displacement_block(dim, alpha)


def hermiticity_residual(m):
    """Max |M - M^H| relative to the matrix scale (1 floor for zero matrices)."""
    m = np.asarray(m)
    scale = max(float(np.max(np.abs(m))), 1e-300)
    return float(np.max(np.abs(m - m.conj().T)) / scale)


def _fingerprint(m):
    return hashlib.sha256(np.ascontiguousarray(m).tobytes()).hexdigest()[:16]


def hermitian_eigvals(m, check=True):
    """All eigenvalues of a Hermitian matrix, ascending and deterministic.

    The input is symmetrized (averaged with its conjugate transpose) before
    decomposition; assembly round-off beyond ``HERMITICITY_RTOL`` is rejected
    when ``check`` is true.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if check:
        res = hermiticity_residual(m)
        if res > HERMITICITY_RTOL:
            raise NumericalError(
                f"matrix is not Hermitian: residual {res:.3e} > {HERMITICITY_RTOL:.0e} "
                f"(fingerprint {_fingerprint(m)})"
            )
    sym = 0.5 * (m + m.conj().T)
    try:
        vals = np.linalg.eigvalsh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed to converge (fingerprint {_fingerprint(sym)}): {exc}"
        ) from exc
    if not np.all(np.isfinite(vals)):
        raise NumericalError(f"non-finite eigenvalues (fingerprint {_fingerprint(sym)})")
    return np.sort(vals)
