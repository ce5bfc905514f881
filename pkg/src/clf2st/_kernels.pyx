# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_kernels_py``; identical signatures."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef void _chol_solve(const double[:, ::1] L, double* b, Py_ssize_t d) noexcept nogil:
    # in place: L L^T x = b
    cdef Py_ssize_t i, k
    cdef double s
    for i in range(d):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * b[k]
        b[i] = s / L[i, i]
    for i in range(d - 1, -1, -1):
        s = b[i]
        for k in range(i + 1, d):
            s -= L[k, i] * b[k]
        b[i] = s / L[i, i]


cdef inline double _score(const double[:, ::1] z, Py_ssize_t row, const double* mid,
                          const double* w, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0
    for j in range(d):
        s += (z[row, j] - mid[j]) * w[j]
    return s


def _as_chol(chol):
    if chol is None:
        return None
    return np.ascontiguousarray(chol, dtype=np.float64)


def split_error_counts(x, y, chol):
    cdef const double[:, ::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] Y = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], h = n // 2, i, j
    cdef bint ident = chol is None
    cdef const double[:, ::1] L = _as_chol(chol) if not ident else np.empty((1, 1))
    cdef double* m0 = <double*> malloc(d * sizeof(double))
    cdef double* w = <double*> malloc(d * sizeof(double))
    cdef double* mid = <double*> malloc(d * sizeof(double))
    cdef long c1 = 0, c2 = 0
    cdef double m1j
    if m0 == NULL or w == NULL or mid == NULL:
        free(m0); free(w); free(mid)
        raise MemoryError()
    with nogil:
        for j in range(d):
            m0[j] = 0.0
            w[j] = 0.0
        for i in range(h):
            for j in range(d):
                m0[j] += X[i, j]
                w[j] += Y[i, j]
        for j in range(d):
            m0[j] /= h
            m1j = w[j] / h
            mid[j] = 0.5 * (m0[j] + m1j)
            w[j] = m1j - m0[j]
        if not ident:
            _chol_solve(L, w, d)
        for i in range(h, 2 * h):
            if _score(X, i, mid, w, d) > 0:
                c1 += 1
            if _score(Y, i, mid, w, d) <= 0:
                c2 += 1
    free(m0); free(w); free(mid)
    return int(c1), int(c2)


def retrain_error_counts(pooled, perms, chol):
    cdef const double[:, ::1] Z = np.ascontiguousarray(pooled, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] idx = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t P = idx.shape[0], two_n = idx.shape[1]
    cdef Py_ssize_t n = two_n // 2, h = n // 2, d = Z.shape[1], p, i, j
    cdef bint ident = chol is None
    cdef const double[:, ::1] L = _as_chol(chol) if not ident else np.empty((1, 1))
    out = np.empty(P, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    cdef double* m0 = <double*> malloc(d * sizeof(double))
    cdef double* w = <double*> malloc(d * sizeof(double))
    cdef double* mid = <double*> malloc(d * sizeof(double))
    cdef long c
    cdef double m1j
    if m0 == NULL or w == NULL or mid == NULL:
        free(m0); free(w); free(mid)
        raise MemoryError()
    with nogil:
        for p in range(P):
            for j in range(d):
                m0[j] = 0.0
                w[j] = 0.0
            for i in range(h):
                for j in range(d):
                    m0[j] += Z[idx[p, i], j]
                    w[j] += Z[idx[p, n + i], j]
            for j in range(d):
                m0[j] /= h
                m1j = w[j] / h
                mid[j] = 0.5 * (m0[j] + m1j)
                w[j] = m1j - m0[j]
            if not ident:
                _chol_solve(L, w, d)
            c = 0
            for i in range(h, 2 * h):
                if _score(Z, idx[p, i], mid, w, d) > 0:
                    c += 1
                if _score(Z, idx[p, n + i], mid, w, d) <= 0:
                    c += 1
            res[p] = c
    free(m0); free(w); free(mid)
    return out


def fixed_rule_error_counts(scores, perms):
    cdef const double[::1] s = np.ascontiguousarray(scores, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] idx = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t P = idx.shape[0], h = idx.shape[1] // 2, p, i
    out = np.empty(P, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    cdef long c
    with nogil:
        for p in range(P):
            c = 0
            for i in range(h):
                if s[idx[p, i]] > 0:
                    c += 1
                if s[idx[p, h + i]] <= 0:
                    c += 1
            res[p] = c
    return out


def loo_error_counts(x, y, chol):
    cdef const double[:, ::1] X = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] Y = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], i, j
    cdef bint ident = chol is None
    cdef const double[:, ::1] L = _as_chol(chol) if not ident else np.empty((1, 1))
    cdef double* m0 = <double*> malloc(d * sizeof(double))
    cdef double* m1 = <double*> malloc(d * sizeof(double))
    cdef double* w = <double*> malloc(d * sizeof(double))
    cdef double* mid = <double*> malloc(d * sizeof(double))
    cdef long c1 = 0, c2 = 0
    cdef double s
    if m0 == NULL or m1 == NULL or w == NULL or mid == NULL:
        free(m0); free(m1); free(w); free(mid)
        raise MemoryError()
    with nogil:
        for j in range(d):
            m0[j] = 0.0
            m1[j] = 0.0
        for i in range(n):
            for j in range(d):
                m0[j] += X[i, j]
                m1[j] += Y[i, j]
        for j in range(d):
            m0[j] /= n
            m1[j] /= n
        for i in range(n):
            # drop X_i from class 0
            for j in range(d):
                s = (n * m0[j] - X[i, j]) / (n - 1)
                mid[j] = 0.5 * (s + m1[j])
                w[j] = m1[j] - s
            if not ident:
                _chol_solve(L, w, d)
            if _score(X, i, mid, w, d) > 0:
                c1 += 1
        for i in range(n):
            for j in range(d):
                s = (n * m1[j] - Y[i, j]) / (n - 1)
                mid[j] = 0.5 * (m0[j] + s)
                w[j] = s - m0[j]
            if not ident:
                _chol_solve(L, w, d)
            if _score(Y, i, mid, w, d) <= 0:
                c2 += 1
    free(m0); free(m1); free(w); free(mid)
    return int(c1), int(c2)
