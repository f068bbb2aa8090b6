# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


def maxplus_conv(a, b):
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t m = av.shape[0], p = av.shape[1], q = bv.shape[1]
    out_arr = np.full((m, p + q - 1), -np.inf)
    arg_arr = np.zeros((m, p + q - 1), dtype=np.int64)
    cdef double[:, ::1] out = out_arr
    cdef cnp.int64_t[:, ::1] arg = arg_arr
    cdef Py_ssize_t r, i, j
    cdef double ai, v
    with nogil:
        for r in range(m):
            for i in range(p):
                ai = av[r, i]
                for j in range(q):
                    v = ai + bv[r, j]
                    if v > out[r, i + j]:
                        out[r, i + j] = v
                        arg[r, i + j] = i
    return out_arr, arg_arr


def compensated_cumsum(x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], k
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double s = 0.0, c = 0.0, t, v
    with nogil:
        for k in range(n):
            v = xv[k]
            t = s + v
            if fabs(s) >= fabs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
            out[k] = s + c
    return out_arr


def sorted_pair_sums(rows):
    cdef double[:, ::1] rv = np.ascontiguousarray(rows, dtype=np.float64)
    cdef Py_ssize_t m = rv.shape[0], k = rv.shape[1], r, g
    out_arr = np.zeros(m)
    cdef double[::1] out = out_arr
    with nogil:
        for g in range(1, k):
            for r in range(m):
                out[r] += (rv[r, g] - rv[r, g - 1]) * <double>(g * (k - g))
    return out_arr
