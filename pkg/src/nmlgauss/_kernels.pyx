# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log

cnp.import_array()

cdef double LOG_2PI = 1.8378770664093453


cdef inline double _clip(double v, double lo, double hi) nogil:
    if v <= lo:
        return lo
    if v >= hi:
        return hi
    return v


cdef inline double _log_env(long n, double mean, double sse, double half,
                            double var_lo, double var_hi) nogil:
    cdef double mu_hat = _clip(mean, -half, half)
    cdef double d = mean - mu_hat
    cdef double spread = sse + n * d * d
    cdef double var_hat = _clip(spread / n, var_lo, var_hi)
    return -0.5 * n * (LOG_2PI + log(var_hat)) - spread / (2.0 * var_hat)


def row_stats(x):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t rows = xv.shape[0], cols = xv.shape[1], i, j
    mean = np.empty(rows, dtype=np.float64)
    sse = np.empty(rows, dtype=np.float64)
    cdef double[::1] mv = mean, sv = sse
    cdef double acc, m, d
    with nogil:
        for i in range(rows):
            acc = 0.0
            for j in range(cols):
                acc += xv[i, j]
            m = acc / cols
            acc = 0.0
            for j in range(cols):
                d = xv[i, j] - m
                acc += d * d
            mv[i] = m
            sv[i] = acc
    return mean, sse


def log_envelope_stats(long n, mean, sse, double alpha, double sigma_min, double sigma_max):
    cdef double[::1] mv = np.ascontiguousarray(mean, dtype=np.float64).ravel()
    cdef double[::1] sv = np.ascontiguousarray(sse, dtype=np.float64).ravel()
    cdef Py_ssize_t i, rows = mv.shape[0]
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double half = 0.5 * alpha
    cdef double var_lo = sigma_min * sigma_min, var_hi = sigma_max * sigma_max
    with nogil:
        for i in range(rows):
            ov[i] = _log_env(n, mv[i], sv[i], half, var_lo, var_hi)
    return out.reshape(np.shape(mean))


def log_envelope_rows(x, double alpha, double sigma_min, double sigma_max):
    cdef double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t rows = xv.shape[0], cols = xv.shape[1], i, j
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double half = 0.5 * alpha
    cdef double var_lo = sigma_min * sigma_min, var_hi = sigma_max * sigma_max
    cdef double acc, m, d
    with nogil:
        for i in range(rows):
            acc = 0.0
            for j in range(cols):
                acc += xv[i, j]
            m = acc / cols
            acc = 0.0
            for j in range(cols):
                d = xv[i, j] - m
                acc += d * d
            ov[i] = _log_env(cols, m, acc, half, var_lo, var_hi)
    return out


def quad_form_rows(z):
    cdef double[:, ::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t rows = zv.shape[0], cols = zv.shape[1], i, j
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double sq, total, v
    with nogil:
        for i in range(rows):
            sq = 0.0
            total = 0.0
            for j in range(cols):
                v = zv[i, j]
                sq += v * v
                total += v
            ov[i] = sq + total * total
    return out
