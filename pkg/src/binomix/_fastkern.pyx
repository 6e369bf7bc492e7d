# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for compact-support polynomial kernel sums.

All kernels handled here are even polynomials on [-1, 1]: K(v) = sum_j
c2[j] * v**(2j) for |v| <= 1 and 0 outside.  The pure-NumPy twin of this
module is ``binomix._purekern``; both expose the same three functions.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def weighted_sums(double[::1] c2, double[::1] pts, double[::1] w,
                  double[::1] us, double h):
    """out[k] = sum_i w[i] * K((pts[i] - us[k]) / h) / h."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t m = us.shape[0]
    cdef Py_ssize_t q = c2.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, k, j
    cdef double v, v2, acc, s, u
    for k in range(m):
        u = us[k]
        s = 0.0
        for i in range(n):
            v = (pts[i] - u) / h
            if v < -1.0 or v > 1.0:
                continue
            v2 = v * v
            acc = c2[q - 1]
            for j in range(q - 2, -1, -1):
                acc = acc * v2 + c2[j]
            s += w[i] * acc
        ov[k] = s / h
    return out


def kernel_values(double[::1] c2, double[::1] pts, double u, double h):
    """out[i] = K((pts[i] - u) / h) / h."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t q = c2.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double v, v2, acc
    for i in range(n):
        v = (pts[i] - u) / h
        if v < -1.0 or v > 1.0:
            continue
        v2 = v * v
        acc = c2[q - 1]
        for j in range(q - 2, -1, -1):
            acc = acc * v2 + c2[j]
        ov[i] = acc / h
    return out


def power_sums(double[::1] pts, double[::1] w, double[::1] us, double h,
               Py_ssize_t npow):
    """M[j, k] = sum_i w[i] * v_ik**(2j) * 1(|v_ik| <= 1) / h.

    Shared by every even-polynomial kernel at the same bandwidth: the
    kernel estimate at us[k] is then sum_j c2[j] * M[j, k].
    """
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t m = us.shape[0]
    out = np.zeros((npow, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, k, j
    cdef double v, v2, p, u, wi
    for k in range(m):
        u = us[k]
        for i in range(n):
            v = (pts[i] - u) / h
            if v < -1.0 or v > 1.0:
                continue
            v2 = v * v
            wi = w[i]
            p = 1.0
            ov[0, k] += wi
            for j in range(1, npow):
                p *= v2
                ov[j, k] += wi * p
    cdef double inv_h = 1.0 / h
    for j in range(npow):
        for k in range(m):
            ov[j, k] *= inv_h
    return out
