# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo accumulators; same contract as ``_mc_py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline double _horner(const double[::1] coeffs, double x) noexcept nogil:
    cdef Py_ssize_t j = coeffs.shape[0]
    cdef double out = 0.0
    while j > 0:
        j -= 1
        out = out * x + coeffs[j]
    return out


cdef inline void _row(const double[:, ::1] pts, Py_ssize_t r, double *total, double *smallest) noexcept nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0, m = pts[r, 0], v
    for j in range(pts.shape[1]):
        v = pts[r, j]
        s += v
        if v < m:
            m = v
    total[0] = s
    smallest[0] = m


def acc_volume(const double[:, ::1] pts, double a, double b):
    cdef Py_ssize_t r
    cdef double total, smallest, n = 0.0
    with nogil:
        for r in range(pts.shape[0]):
            _row(pts, r, &total, &smallest)
            if total - smallest <= a and total <= b:
                n += 1.0
    return n, n


def acc_I(const double[:, ::1] pts, const double[::1] coeffs, double a, double b):
    cdef Py_ssize_t r
    cdef double total, smallest, F, v, s = 0.0, ss = 0.0
    with nogil:
        for r in range(pts.shape[0]):
            _row(pts, r, &total, &smallest)
            if total - smallest <= a and total <= b:
                F = _horner(coeffs, total)
                v = F * F
                s += v
                ss += v * v
    return s, ss


def acc_J(const double[:, ::1] pts, const double[::1] ti2, Py_ssize_t i, const double[::1] coeffs,
          double a, double b, double gate):
    cdef Py_ssize_t r, j
    cdef double total, smallest, rest, total2, smallest2, F1, F2, v, s = 0.0, ss = 0.0
    with nogil:
        for r in range(pts.shape[0]):
            _row(pts, r, &total, &smallest)
            rest = total - pts[r, i]
            if rest > gate:
                continue
            F1 = 0.0
            if total - smallest <= a and total <= b:
                F1 = _horner(coeffs, total)
            if F1 == 0.0:
                continue
            total2 = rest + ti2[r]
            smallest2 = ti2[r]
            for j in range(pts.shape[1]):
                if j != i and pts[r, j] < smallest2:
                    smallest2 = pts[r, j]
            F2 = 0.0
            if total2 - smallest2 <= a and total2 <= b:
                F2 = _horner(coeffs, total2)
            v = F1 * F2
            s += v
            ss += v * v
    return s, ss


def acc_Q(const double[:, ::1] pts, const double[::1] y, Py_ssize_t i, const double[::1] coeffs,
          double a, double b, double c, double inv_theta, double cut, double gate_lo, double gate_hi):
    cdef Py_ssize_t r, j
    cdef double total, smallest, rest, yy, total2, smallest2, F1, F2, d, v, gate
    cdef double s = 0.0, ss = 0.0
    with nogil:
        for r in range(pts.shape[0]):
            yy = y[r]
            if pts[r, i] >= inv_theta - yy:
                continue
            _row(pts, r, &total, &smallest)
            rest = total - pts[r, i]
            gate = gate_lo if yy < cut else gate_hi
            if rest > gate:
                continue
            F1 = 0.0
            if total - smallest <= a and total <= b:
                F1 = _horner(coeffs, total)
            total2 = total + yy
            smallest2 = pts[r, i] + yy
            for j in range(pts.shape[1]):
                if j != i and pts[r, j] < smallest2:
                    smallest2 = pts[r, j]
            F2 = 0.0
            if total2 - smallest2 <= a and total2 <= b:
                F2 = _horner(coeffs, total2)
            d = F2 - F1
            v = (1.0 - c * yy) / yy * d * d
            s += v
            ss += v * v
    return s, ss
