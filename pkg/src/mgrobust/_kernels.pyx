# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels for the worst-case transaction cost.

Single fused pass over the candidate matrix: no temporaries, first-index
tie-breaking identical to the numpy fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def vertex_values(double[:, ::1] totals, double[::1] half_spread,
                  double[::1] mid_price, double[::1] p):
    cdef Py_ssize_t nv = totals.shape[0]
    cdef Py_ssize_t nt = totals.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nv, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t v, t
    cdef double acc, d
    for v in range(nv):
        acc = 0.0
        for t in range(nt):
            d = p[t] - totals[v, t]
            acc += mid_price[t] * d
            if d < 0.0:
                d = -d
            acc += half_spread[t] * d
        ov[v] = acc
    return out


def worst_vertex(double[:, ::1] totals, double[::1] half_spread,
                 double[::1] mid_price, double[::1] p):
    cdef Py_ssize_t nv = totals.shape[0]
    cdef Py_ssize_t nt = totals.shape[1]
    cdef Py_ssize_t v, t, best = 0
    cdef double acc, d
    cdef double best_val = -1e308
    for v in range(nv):
        acc = 0.0
        for t in range(nt):
            d = p[t] - totals[v, t]
            acc += mid_price[t] * d
            if d < 0.0:
                d = -d
            acc += half_spread[t] * d
        if acc > best_val:
            best_val = acc
            best = v
    return best, best_val
