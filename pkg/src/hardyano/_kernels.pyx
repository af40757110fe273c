# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sample-domain kernels.

Fused single-pass loops over the grid; see ``_kernels_py`` for the numpy
reference versions these must agree with.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, hypot, log1p, expm1, cbrt

cnp.import_array()


def abs_power_mean(const double complex[::1] z, double p):
    cdef const double[::1] v = np.asarray(z).view(np.float64)
    cdef Py_ssize_t j, m = z.shape[0]
    cdef double acc = 0.0, re, im
    with nogil:
        if p == 2.0:
            for j in range(m):
                re = v[2 * j]
                im = v[2 * j + 1]
                acc += re * re + im * im
        elif p == 1.0:
            for j in range(m):
                re = v[2 * j]
                im = v[2 * j + 1]
                acc += hypot(re, im)
        else:
            for j in range(m):
                re = v[2 * j]
                im = v[2 * j + 1]
                acc += pow(hypot(re, im), p)
    return acc / m


def abs_max(const double complex[::1] z):
    cdef const double[::1] v = np.asarray(z).view(np.float64)
    cdef Py_ssize_t j, m = z.shape[0]
    cdef double best = 0.0, s, re, im
    with nogil:
        for j in range(m):
            re = v[2 * j]
            im = v[2 * j + 1]
            s = hypot(re, im)
            best = s if s > best else best
    return best


def phi_mean(const double[::1] x, double scale, double r):
    cdef Py_ssize_t j, m = x.shape[0]
    cdef double acc = 0.0, y
    with nogil:
        if r == 1.0:
            for j in range(m):
                y = x[j] * scale
                acc += y * log1p(y)
        else:
            for j in range(m):
                y = x[j] * scale
                acc += y * expm1(r * log1p(log1p(y)))
    return acc / m


def zygmund_mean(const double[::1] x, double r):
    cdef Py_ssize_t j, m = x.shape[0]
    cdef double acc = 0.0, y
    with nogil:
        if r == 1.0:
            for j in range(m):
                acc += x[j] * log1p(x[j])
        else:
            for j in range(m):
                y = log1p(x[j])
                if y > 0.0:
                    acc += x[j] * pow(y, r)
    return acc / m


def a_lambda(const double[::1] x, double lam):
    cdef Py_ssize_t j, m = x.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double v
    with nogil:
        for j in range(m):
            v = cbrt(x[j] / lam)
            o[j] = v if v > 1.0 else 1.0
    return out


def reciprocal_analytic(const double[::1] a, const double[::1] h):
    cdef Py_ssize_t j, m = a.shape[0]
    out = np.empty(m, dtype=np.complex128)
    cdef double[::1] o = out.view(np.float64)
    cdef double d
    with nogil:
        for j in range(m):
            d = a[j] * a[j] + h[j] * h[j]
            o[2 * j] = a[j] / d
            o[2 * j + 1] = -h[j] / d
    return out


def g_from_f(const double complex[::1] F):
    cdef Py_ssize_t j, m = F.shape[0]
    out = np.empty(m, dtype=np.complex128)
    cdef double[::1] o = out.view(np.float64)
    cdef const double[::1] f = np.asarray(F).view(np.float64)
    cdef double a, b, c, d, t
    with nogil:
        for j in range(m):
            # plain real arithmetic; avoids the C99 complex multiply helper
            a = f[2 * j]
            b = f[2 * j + 1]
            t = a * a - b * b
            b = 2.0 * a * b
            a = t
            t = a * a - b * b
            b = 2.0 * a * b
            c = 1.0 - t
            d = -b
            t = c * c - d * d
            d = 2.0 * c * d
            c = t
            t = c * c - d * d
            d = 2.0 * c * d
            o[2 * j] = 1.0 - t
            o[2 * j + 1] = -d
    return out
