"""Dense real symmetric matrix kernel.

Block assembly, principal submatrices, SPD Cholesky factorization,
log-determinants and linear solves. Everything downstream (channel matrices,
entropies, oracles) funnels its linear algebra through this module.

Two interchangeable backends implement the factorization loops: a compiled
Cython module and a NumPy/SciPy fallback. The compiled one is preferred at
import time; `set_backend` switches explicitly (used by tests and the
benchmark script).
"""
import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite
from . import _kernels_py

try:
    from . import _kernels_cy
except ImportError:  # pragma: no cover - depends on the build environment
    _kernels_cy = None

_impl = _kernels_cy if _kernels_cy is not None else _kernels_py


def backend_name():
    """Name of the active factorization backend."""
    return "cython" if _impl is _kernels_cy else "python"


def available_backends():
    names = ["python"]
    if _kernels_cy is not None:
        names.insert(0, "cython")
    return names


def set_backend(name):
    """Select 'cython' or 'python' kernels; raises if unavailable."""
    global _impl
    if name == "python":
        _impl = _kernels_py
    elif name == "cython":
        if _kernels_cy is None:
            raise ValueError("compiled kernels are not available in this install")
        _impl = _kernels_cy
    else:
        raise ValueError(f"unknown backend {name!r}")


def _as_array(m):
    if isinstance(m, SymMatrix):
        return m.entries
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    return a


def _as_square(m):
    a = _as_array(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    return a


def symmetrize(m):
    """(M + M^T)/2; stops round-off drift on mathematically symmetric products."""
    a = _as_square(m)
    return (a + a.T) / 2.0


class SymMatrix:
    """Immutable dense real symmetric matrix (row-major float64 entries).

    Symmetry is enforced on construction by symmetrization, so downstream
    factorizations never see round-off asymmetry.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        a = np.array(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"symmetric matrix needs a square array, got {a.shape}")
        a = np.ascontiguousarray((a + a.T) / 2.0)
        a.setflags(write=False)
        self.entries = a

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype) if dtype or copy else self.entries

    def __repr__(self):
        return f"SymMatrix(dim={self.dim})"


class CholFactor:
    """Lower Cholesky factor of an SPD matrix, reusable for logdet and solves."""

    __slots__ = ("lower",)

    def __init__(self, lower):
        self.lower = lower

    @property
    def dim(self):
        return self.lower.shape[0]

    def logdet(self):
        return _impl.logdet_from_factor(self.lower)

    def solve(self, rhs):
        b = np.asarray(rhs, dtype=np.float64)
        vector = b.ndim == 1
        if vector:
            b = b[:, None]
        if b.ndim != 2 or b.shape[0] != self.dim:
            raise DimensionMismatch(
                f"rhs rows {b.shape} do not match factor dim {self.dim}")
        x = _impl.solve_factored(self.lower, np.ascontiguousarray(b))
        return x[:, 0] if vector else x


def spd_factor(m):
    """Cholesky-factor an SPD matrix.

    Raises NotPositiveDefinite when a pivot is <= dim * eps * max(diag); for
    valid channel parameters that only happens on malformed inputs, so the
    failure is a diagnostic, not a recoverable condition.
    """
    a = np.ascontiguousarray(_as_square(m))
    lower = _impl.chol_factor(a)
    if lower is None:
        raise NotPositiveDefinite(f"matrix of dim {a.shape[0]} failed Cholesky pivot test")
    return CholFactor(lower)


def spd_logdet(m):
    """Natural-log determinant of an SPD matrix."""
    return spd_factor(m).logdet()


def spd_solve(m, rhs):
    """Solve m @ X = rhs for SPD m."""
    return spd_factor(m).solve(rhs)


def block_diag(a, b):
    """Direct sum of two symmetric matrices."""
    a = _as_square(a)
    b = _as_square(b)
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da + db, da + db))
    out[:da, :da] = a
    out[da:, da:] = b
    return SymMatrix(out)


def top_left(m, k):
    """Leading k x k principal submatrix."""
    a = _as_square(m)
    if not 0 < k <= a.shape[0]:
        raise DimensionMismatch(f"k={k} outside 1..{a.shape[0]}")
    sub = a[:k, :k]
    return SymMatrix(sub) if isinstance(m, SymMatrix) else sub.copy()


def matmul(a, b):
    """Plain matrix product a @ b."""
    a = _as_array(a)
    b = _as_array(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"inner dims differ: {a.shape} @ {b.shape}")
    return a @ b


def transpose_matmul(a, b):
    """Matrix product a^T @ b."""
    a = _as_array(a)
    b = _as_array(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"inner dims differ: {a.shape}^T @ {b.shape}")
    return a.T @ b
