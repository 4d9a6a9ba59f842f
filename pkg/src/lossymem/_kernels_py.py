"""NumPy/SciPy implementations of the factorization kernels.

Fallback backend with the same contract as the compiled module: chol_factor
returns None (instead of raising) when a pivot falls below the
positive-definiteness threshold dim * eps * max(diag).
"""
import numpy as np
from scipy.linalg import solve_triangular

_EPS = np.finfo(np.float64).eps


def chol_factor(a):
    d = a.shape[0]
    max_diag = np.max(np.diag(a))
    if max_diag <= 0.0:
        return None
    thresh = d * _EPS * max_diag
    try:
        lower = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None
    piv = np.diag(lower)
    if np.min(piv * piv) <= thresh:
        return None
    return lower


def logdet_from_factor(lower):
    return 2.0 * float(np.sum(np.log(np.diag(lower))))


def solve_factored(lower, rhs):
    y = solve_triangular(lower, rhs, lower=True, check_finite=False)
    return solve_triangular(lower.T, y, lower=False, check_finite=False)
