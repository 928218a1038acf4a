# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Both functions return the norm of every enumerated combination, in the
same order as the pure-Python versions in ``_pykernels``.
"""
import numpy as np
from libc.math cimport fabs, pow, sqrt


cdef inline double _norm(double* sr, double* si, Py_ssize_t d,
                         int kind, double p, bint real) noexcept nogil:
    cdef Py_ssize_t t
    cdef double acc = 0.0
    cdef double a
    if real:
        if kind == 1:
            for t in range(d):
                a = fabs(sr[t])
                if a > acc:
                    acc = a
            return acc
        if p == 1.0:
            for t in range(d):
                acc += fabs(sr[t])
            return acc
        if p == 2.0:
            for t in range(d):
                acc += sr[t] * sr[t]
            return sqrt(acc)
        for t in range(d):
            acc += pow(fabs(sr[t]), p)
        return pow(acc, 1.0 / p)
    if kind == 1:
        for t in range(d):
            a = sr[t] * sr[t] + si[t] * si[t]
            if a > acc:
                acc = a
        return sqrt(acc)
    if p == 1.0:
        for t in range(d):
            acc += sqrt(sr[t] * sr[t] + si[t] * si[t])
        return acc
    if p == 2.0:
        for t in range(d):
            acc += sr[t] * sr[t] + si[t] * si[t]
        return sqrt(acc)
    for t in range(d):
        acc += pow(sr[t] * sr[t] + si[t] * si[t], 0.5 * p)
    return pow(acc, 1.0 / p)


def vertex_norms(const double[:, ::1] re, const double[:, ::1] im,
                 int kind, double p):
    """Norms of sum_j s_j v_j over sign vectors with s_0 = +1, Gray order."""
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t d = re.shape[1]
    cdef Py_ssize_t count = (<Py_ssize_t>1) << (n - 1)
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    sr_arr = np.asarray(re).sum(axis=0)
    si_arr = np.asarray(im).sum(axis=0)
    cdef double[::1] sr = sr_arr
    cdef double[::1] si = si_arr
    signs_arr = np.ones(n, dtype=np.float64)
    cdef double[::1] signs = signs_arr
    cdef Py_ssize_t i, j, t, g, r
    cdef double sg
    cdef bint real = not np.any(np.asarray(im))
    with nogil:
        o[0] = _norm(&sr[0], &si[0], d, kind, p, real)
        for i in range(1, count):
            g = i
            j = 1
            while (g & 1) == 0:
                g >>= 1
                j += 1
            sg = signs[j]
            for t in range(d):
                sr[t] -= 2.0 * sg * re[j, t]
                si[t] -= 2.0 * sg * im[j, t]
            signs[j] = -sg
            if (i & 1023) == 0:
                # periodic rebuild keeps the running sum from drifting
                for t in range(d):
                    sr[t] = 0.0
                    si[t] = 0.0
                for r in range(n):
                    for t in range(d):
                        sr[t] += signs[r] * re[r, t]
                        si[t] += signs[r] * im[r, t]
            o[i] = _norm(&sr[0], &si[0], d, kind, p, real)
    return out


def torus_norms(const double[:, ::1] re, const double[:, ::1] im,
                int kind, double p, Py_ssize_t m):
    """Norms of sum_j exp(2 pi i t_j / m) v_j over t in {0..m-1}^(N-1), t_0 = 0.

    Odometer order with row 1 as the fastest digit.
    """
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t d = re.shape[1]
    cdef Py_ssize_t count = 1
    cdef Py_ssize_t r
    for r in range(n - 1):
        count *= m
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cos_arr = np.cos(2.0 * np.pi * np.arange(m) / m)
    sin_arr = np.sin(2.0 * np.pi * np.arange(m) / m)
    cdef double[::1] cs = cos_arr
    cdef double[::1] sn = sin_arr
    sr_arr = np.asarray(re).sum(axis=0)
    si_arr = np.asarray(im).sum(axis=0)
    cdef double[::1] sr = sr_arr
    cdef double[::1] si = si_arr
    digits_arr = np.zeros(n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] digits = digits_arr
    cdef Py_ssize_t i, j, t, old, new
    cdef double dc, ds
    with nogil:
        o[0] = _norm(&sr[0], &si[0], d, kind, p, False)
        for i in range(1, count):
            j = 1
            digits[1] += 1
            while digits[j] == m:
                digits[j] = 0
                j += 1
                digits[j] += 1
            if j == 1:
                new = digits[1]
                old = new - 1
                dc = cs[new] - cs[old]
                ds = sn[new] - sn[old]
                for t in range(d):
                    sr[t] += dc * re[1, t] - ds * im[1, t]
                    si[t] += dc * im[1, t] + ds * re[1, t]
            else:
                # carry: rebuild from scratch to stop drift
                for t in range(d):
                    sr[t] = re[0, t]
                    si[t] = im[0, t]
                for r in range(1, n):
                    new = digits[r]
                    for t in range(d):
                        sr[t] += cs[new] * re[r, t] - sn[new] * im[r, t]
                        si[t] += cs[new] * im[r, t] + sn[new] * re[r, t]
            o[i] = _norm(&sr[0], &si[0], d, kind, p, False)
    return out
