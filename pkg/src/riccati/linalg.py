"""Dense complex kernels shared by every solver.

All matrices are numpy arrays promoted to complex128.  Everything here is
pure: no routine mutates its arguments.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import SingularMatrix

PIVOT_RTOL = 1e-14

__all__ = [
    "as_matrix",
    "hermitian_part",
    "symmetrize",
    "frobenius_norm",
    "solve_linear",
    "solve_right",
    "min_pivot",
    "psd_check",
    "spectral_radius_estimate",
]


def as_matrix(a) -> np.ndarray:
    """Validate and promote `a` to a 2-d complex128 array.

    Raises ValueError on non-finite entries or wrong dimensionality.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def hermitian_part(m) -> np.ndarray:
    """Return (M + M^*)/2, checking M is square and close to Hermitian.

    The drift tolerance is 1e-12 * max(1, ||M||_F); iterations that preserve
    Hermitian structure exactly in exact arithmetic are re-symmetrized
    through this to prevent rounding drift.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("Hermitian matrices must be square")
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.linalg.norm(m - m.conj().T) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return (m + m.conj().T) / 2


def symmetrize(m) -> np.ndarray:
    """Unchecked Hermitian part, for re-symmetrizing iteration updates."""
    m = np.asarray(m, dtype=np.complex128)
    return (m + m.conj().T) / 2


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m, dtype=np.complex128)))


def _lu(m: np.ndarray):
    # scipy wraps LAPACK getrf: Gaussian elimination with row pivoting.
    # Singular pivots are checked by the callers, so silence scipy's warning.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(m, check_finite=False)


def min_pivot(m) -> float:
    """Smallest pivot modulus of the row-pivoted LU factorization of M."""
    m = as_matrix(m)
    lu, _ = _lu(m)
    return float(np.min(np.abs(np.diag(lu))))


def solve_linear(m, b) -> np.ndarray:
    """Solve M X = B by row-pivoted elimination.

    Raises SingularMatrix when a pivot falls below 1e-14 * ||M||_F
    (scaled to max(1, .) so the exact zero matrix is also rejected).
    """
    m = as_matrix(m)
    b = as_matrix(b)
    if m.shape[0] != m.shape[1]:
        raise SingularMatrix("coefficient matrix must be square")
    if b.shape[0] != m.shape[0]:
        raise SingularMatrix("dimension mismatch between M and B")
    lu, piv = _lu(m)
    threshold = PIVOT_RTOL * max(1.0, float(np.linalg.norm(m)))
    if np.min(np.abs(np.diag(lu))) < threshold:
        raise SingularMatrix("pivot below singularity threshold")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def solve_right(b, m) -> np.ndarray:
    """Solve X M = B, i.e. return B M^{-1}."""
    return solve_linear(as_matrix(m).conj().T, as_matrix(b).conj().T).conj().T


def psd_check(m, tol: float = 0.0) -> bool:
    """True iff the smallest eigenvalue of Hermitian M is >= -tol * max(1, ||M||_F)."""
    m = symmetrize(as_matrix(m))
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if m.size == 0:
        return True
    lam_min = float(np.linalg.eigvalsh(m)[0])
    return lam_min >= -tol * max(1.0, float(np.linalg.norm(m)))


def spectral_radius_estimate(m, max_doublings: int = 20) -> float:
    """Upper bound on the spectral radius via norms of repeated squares.

    Returns ||M^(2^j)||_F^(1/2^j) for the largest computed j <= max_doublings.
    The estimate never drops below rho(M) and is nonincreasing in j; powers
    are renormalized internally so the squaring never overflows.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("spectral radius needs a square matrix")
    if max_doublings < 1:
        raise ValueError("max_doublings must be >= 1")
    power = m
    log_scale = 0.0  # log of the product of norms divided out so far
    for j in range(1, max_doublings + 1):
        nrm = float(np.linalg.norm(power))
        if nrm == 0.0:
            return 0.0
        power = (power / nrm) @ (power / nrm)
        log_scale = 2.0 * (log_scale + np.log(nrm))
        # estimate after j doublings: exp((log ||M^(2^j)||) / 2^j)
    final = float(np.linalg.norm(power))
    if final == 0.0:
        return 0.0
    return float(np.exp((log_scale + np.log(final)) / 2.0**max_doublings))
