# cython: language_level=3
"""Dense pivot primitives, compiled implementation.

Same contract as ``_pivot_py``; see that module for documentation.  Loops
are written against typed memoryviews so each primitive runs as straight C
over contiguous float64 buffers.
"""

import numpy as np

cimport numpy as cnp

NAME = "cython"


def price(double[:, ::1] AT, double[::1] y, double[::1] c, double[::1] out):
    cdef Py_ssize_t n = AT.shape[0]
    cdef Py_ssize_t m = AT.shape[1]
    cdef Py_ssize_t i, j
    cdef double acc
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += AT[j, i] * y[i]
        out[j] = c[j] - acc
    return np.asarray(out)


def ftran(double[:, ::1] Binv, double[::1] col, double[::1] out):
    cdef Py_ssize_t m = Binv.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc
    for i in range(m):
        acc = 0.0
        for k in range(m):
            acc += Binv[i, k] * col[k]
        out[i] = acc
    return np.asarray(out)


def btran(double[:, ::1] Binv, double[::1] cB, double[::1] out):
    cdef Py_ssize_t m = Binv.shape[0]
    cdef Py_ssize_t i, k
    cdef double acc
    for k in range(m):
        acc = 0.0
        for i in range(m):
            acc += cB[i] * Binv[i, k]
        out[k] = acc
    return np.asarray(out)


def update_inverse(double[:, ::1] Binv, double[::1] w, Py_ssize_t r):
    cdef Py_ssize_t m = Binv.shape[0]
    cdef Py_ssize_t i, k
    cdef double piv = w[r]
    cdef double factor
    for k in range(m):
        Binv[r, k] /= piv
    for i in range(m):
        if i == r:
            continue
        factor = w[i]
        if factor != 0.0:
            for k in range(m):
                Binv[i, k] -= factor * Binv[r, k]


def ratio_test(double[::1] xB, double[::1] lB, double[::1] uB, double[::1] w,
               double dirsign, double cap, double piv_tol):
    cdef Py_ssize_t m = xB.shape[0]
    if m == 0:
        return (cap, -1, 0)
    cdef double best = np.inf
    cdef Py_ssize_t pos = 0
    cdef int kind_best = 0
    cdef Py_ssize_t i
    cdef double eff, lim
    cdef int kind
    cdef bint seen = False
    for i in range(m):
        eff = dirsign * w[i]
        if eff > piv_tol:
            lim = (xB[i] - lB[i]) / eff
            kind = 1
        elif eff < -piv_tol:
            lim = (uB[i] - xB[i]) / (-eff)
            kind = 2
        else:
            continue
        if lim < 0.0:
            lim = 0.0
        if not seen or lim < best:
            seen = True
            best = lim
            pos = i
            kind_best = kind
    if not seen or cap <= best:
        return (cap, -1, 0)
    return (best, pos, kind_best)
