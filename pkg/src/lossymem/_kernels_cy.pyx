# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled factorization kernels.

Same contract as _kernels_py: chol_factor returns None when a pivot falls
below the positive-definiteness threshold dim * eps * max(diag). Typed
memoryviews only; matrices here are tiny (4n x 4n, n <= ~16), so plain
loops beat any BLAS dispatch overhead.
"""
import numpy as np

from libc.math cimport log, sqrt

cdef double _EPS = 2.220446049250313e-16


def chol_factor(const double[:, ::1] a):
    cdef Py_ssize_t d = a.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double max_diag, thresh, acc, pivot

    max_diag = a[0, 0]
    for i in range(1, d):
        if a[i, i] > max_diag:
            max_diag = a[i, i]
    if max_diag <= 0.0:
        return None
    thresh = d * _EPS * max_diag

    out = np.zeros((d, d), dtype=np.float64)
    cdef double[:, ::1] lo = out
    for j in range(d):
        acc = a[j, j]
        for k in range(j):
            acc -= lo[j, k] * lo[j, k]
        if acc <= thresh:
            return None
        pivot = sqrt(acc)
        lo[j, j] = pivot
        for i in range(j + 1, d):
            acc = a[i, j]
            for k in range(j):
                acc -= lo[i, k] * lo[j, k]
            lo[i, j] = acc / pivot
    return out


def logdet_from_factor(const double[:, ::1] lower):
    cdef Py_ssize_t d = lower.shape[0]
    cdef Py_ssize_t j
    cdef double acc = 0.0
    for j in range(d):
        acc += log(lower[j, j])
    return 2.0 * acc


def solve_factored(const double[:, ::1] lower, rhs):
    cdef Py_ssize_t d = lower.shape[0]
    out = np.array(rhs, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] x = out
    cdef Py_ssize_t m = x.shape[1]
    cdef Py_ssize_t i, j, c
    cdef double acc

    for c in range(m):
        for i in range(d):
            acc = x[i, c]
            for j in range(i):
                acc -= lower[i, j] * x[j, c]
            x[i, c] = acc / lower[i, i]
        for i in range(d - 1, -1, -1):
            acc = x[i, c]
            for j in range(i + 1, d):
                acc -= lower[j, i] * x[j, c]
            x[i, c] = acc / lower[i, i]
    return out
