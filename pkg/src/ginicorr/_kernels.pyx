# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise kernels: the O(n^2) inner loops of the estimators.

Pairs run in the fixed order i < j and floating sums use Neumaier
compensated accumulation, so results are reproducible bit-for-bit for a
given input.  Drop-in replacement for ``_kernels_np``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"


cdef inline void _acc(double* s, double* c, double x) noexcept nogil:
    # Neumaier variant of Kahan summation.
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef inline double _sgn(double v) noexcept nogil:
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


def symgini_components(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef double s1 = 0, c1 = 0, s2 = 0, c2 = 0, s3 = 0, c3 = 0
    cdef double dx, dy, d, inv
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                d = sqrt(dx * dx + dy * dy)
                if d > 0:
                    inv = 1.0 / d
                    _acc(&s1, &c1, dx * dx * inv)
                    _acc(&s2, &c2, dx * dy * inv)
                    _acc(&s3, &c3, dy * dy * inv)
    return s1 + c1, s2 + c2, s3 + c3


def regular_gini_sums(const double[::1] xv, const double[::1] ysign):
    cdef Py_ssize_t n = xv.shape[0], i, j
    cdef double s1 = 0, c1 = 0, s2 = 0, c2 = 0
    cdef double dx, sy
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dx = xv[i] - xv[j]
                sy = _sgn(ysign[i] - ysign[j])
                _acc(&s1, &c1, dx * sy)
                _acc(&s2, &c2, fabs(dx))
    return s1 + c1, s2 + c2


def kendall_stats(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef long long num = 0, px = 0, py = 0
    cdef double sx, sy
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                sx = _sgn(x[i] - x[j])
                sy = _sgn(y[i] - y[j])
                num += <long long> (sx * sy)
                if sx != 0:
                    px += 1
                if sy != 0:
                    py += 1
    return num, px, py


def kendall_g_all(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef cnp.ndarray[cnp.int64_t, ndim=1] g = np.zeros(n, dtype=np.int64)
    cdef long long[::1] gv = g
    cdef long long acc
    with nogil:
        for i in range(n):
            acc = 0
            for j in range(n):
                if j != i:
                    acc += <long long> (_sgn(x[j] - x[i]) * _sgn(y[j] - y[i]))
            gv[i] = acc
    return g


def gini_g_all(const double[::1] xv, const double[::1] ysign):
    cdef Py_ssize_t n = xv.shape[0], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g1 = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g2 = np.zeros(n)
    cdef double[::1] g1v = g1
    cdef double[::1] g2v = g2
    cdef double a1, a2, dx
    with nogil:
        for i in range(n):
            a1 = 0
            a2 = 0
            for j in range(n):
                if j != i:
                    dx = xv[i] - xv[j]
                    a1 += dx * _sgn(ysign[i] - ysign[j])
                    a2 += fabs(dx)
            g1v[i] = a1
            g2v[i] = a2
    return g1, g2


def scatter_pair_sums(const double[::1] x, const double[::1] y, double a, double b, double c):
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef double s11 = 0, c11 = 0, s12 = 0, c12 = 0, s22 = 0, c22 = 0
    cdef double dx, dy, q, w
    cdef bint bad = False
    with nogil:
        for i in range(n):
            if bad:
                break
            for j in range(i + 1, n):
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                if dx == 0 and dy == 0:
                    continue
                q = a * dx * dx + 2.0 * b * dx * dy + c * dy * dy
                if q <= 0:
                    bad = True
                    break
                w = 1.0 / sqrt(q)
                _acc(&s11, &c11, dx * dx * w)
                _acc(&s12, &c12, dx * dy * w)
                _acc(&s22, &c22, dy * dy * w)
    if bad:
        nan = float("nan")
        return nan, nan, nan
    return s11 + c11, s12 + c12, s22 + c22


def if_sums_at(double px, double py, const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i
    cdef double s1 = 0, c1 = 0, s2 = 0, c2 = 0, s3 = 0, c3 = 0
    cdef double dx, dy, d, inv
    with nogil:
        for i in range(n):
            dx = px - x[i]
            dy = py - y[i]
            d = sqrt(dx * dx + dy * dy)
            if d > 0:
                inv = 2.0 / d
                _acc(&s1, &c1, dx * dx * inv)
                _acc(&s2, &c2, dx * dy * inv)
                _acc(&s3, &c3, dy * dy * inv)
    return s1 + c1, s2 + c2, s3 + c3


def if_sums_all(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] l1 = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] l2 = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] l3 = np.zeros(n)
    cdef double[::1] v1 = l1
    cdef double[::1] v2 = l2
    cdef double[::1] v3 = l3
    cdef double a1, a2, a3, dx, dy, d, inv
    with nogil:
        for i in range(n):
            a1 = 0
            a2 = 0
            a3 = 0
            for j in range(n):
                dx = x[i] - x[j]
                dy = y[i] - y[j]
                d = sqrt(dx * dx + dy * dy)
                if d > 0:
                    inv = 2.0 / d
                    a1 += dx * dx * inv
                    a2 += dx * dy * inv
                    a3 += dy * dy * inv
            v1[i] = a1
            v2[i] = a2
            v3[i] = a3
    return l1, l2, l3
