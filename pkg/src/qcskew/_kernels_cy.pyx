# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: batch triangle skew, circle distance extremes,
unit-circle ratio scan, polygon diameter and signed area."""

from libc.math cimport cos, sin, sqrt, M_PI, INFINITY

import numpy as np

BACKEND = "cython"


def skew_batch(a, b, c):
    cdef double complex[:] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef double complex[:] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef double complex[:] cv = np.ascontiguousarray(c, dtype=np.complex128)
    cdef Py_ssize_t n = av.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[:] ov = out
    cdef double dab, dbc, dca, hi, lo
    for i in range(n):
        dab = sqrt((av[i].real - bv[i].real) ** 2 + (av[i].imag - bv[i].imag) ** 2)
        dbc = sqrt((bv[i].real - cv[i].real) ** 2 + (bv[i].imag - cv[i].imag) ** 2)
        dca = sqrt((cv[i].real - av[i].real) ** 2 + (cv[i].imag - av[i].imag) ** 2)
        hi = dab
        if dbc > hi:
            hi = dbc
        if dca > hi:
            hi = dca
        lo = dab
        if dbc < lo:
            lo = dbc
        if dca < lo:
            lo = dca
        ov[i] = hi / lo if lo > 0.0 else INFINITY
    return out


def circle_minmax(base, pts):
    cdef double complex b = base
    cdef double complex[:] pv = np.ascontiguousarray(pts, dtype=np.complex128)
    cdef Py_ssize_t n = pv.shape[0], i, imin = 0, imax = 0
    cdef double d, dmin = INFINITY, dmax = -1.0
    for i in range(n):
        d = sqrt((pv[i].real - b.real) ** 2 + (pv[i].imag - b.imag) ** 2)
        if d < dmin:
            dmin = d
            imin = i
        if d > dmax:
            dmax = d
            imax = i
    return dmin, dmax, imin, imax


def ratio_scan(double mu, Py_ssize_t n):
    cdef double step = 2.0 * M_PI / n
    cdef double ap = (1.0 + mu) ** 2
    cdef double bm = (1.0 - mu) ** 2
    cdef double t, ts, num, den, r2, best = -1.0, best_theta = 0.0
    cdef Py_ssize_t i, best_i = 0
    for i in range(n):
        t = step * i
        num = ap * cos(t) ** 2 + bm * sin(t) ** 2
        ts = t + M_PI / 3.0
        den = ap * cos(ts) ** 2 + bm * sin(ts) ** 2
        r2 = num / den
        if r2 > best:
            best = r2
            best_theta = t
            best_i = i
    return sqrt(best), best_theta, best_i


def polygon_diameter(pts):
    cdef double complex[:] pv = np.ascontiguousarray(pts, dtype=np.complex128)
    cdef Py_ssize_t n = pv.shape[0], i, j, bi = 0, bj = 0
    cdef double d2, best = -1.0, xi, yi
    for i in range(n - 1):
        xi = pv[i].real
        yi = pv[i].imag
        for j in range(i + 1, n):
            d2 = (pv[j].real - xi) ** 2 + (pv[j].imag - yi) ** 2
            if d2 > best:
                best = d2
                bi = i
                bj = j
    return (sqrt(best) if best > 0.0 else 0.0), bi, bj


def polygon_area_signed(pts):
    cdef double complex[:] pv = np.ascontiguousarray(pts, dtype=np.complex128)
    cdef Py_ssize_t n = pv.shape[0], i, k
    cdef double acc = 0.0
    for i in range(n):
        k = i + 1 if i + 1 < n else 0
        acc += pv[i].real * pv[k].imag - pv[k].real * pv[i].imag
    return 0.5 * acc
