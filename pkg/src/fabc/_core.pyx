# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels on top of GSL's special functions.

Mirrors the surface of fabc._purepy (j0, k1, xk1, product_cdf, solve_xk1)
with scalar C loops; selected automatically at import when available.
"""

from libc.math cimport exp, log, sqrt, fabs, INFINITY, M_PI

import numpy as np

cdef extern from "gsl/gsl_errno.h":
    ctypedef struct gsl_error_handler_t:
        pass
    gsl_error_handler_t* gsl_set_error_handler_off()

cdef extern from "gsl/gsl_sf_bessel.h":
    double gsl_sf_bessel_J0(double x) nogil
    double gsl_sf_bessel_K0_scaled(double x) nogil
    double gsl_sf_bessel_K1_scaled(double x) nogil

gsl_set_error_handler_off()

name = "compiled"

DEF K1_ZERO_CUTOFF = 700.0
DEF K1_INF_CUTOFF = 1e-305
DEF TWO_GAMMA = 1.1544313298030658
DEF EPS = 2.220446049250313e-16


cdef inline double _xk1(double x) nogil:
    if x <= 1e-290:
        return 1.0
    if x > 746.0:
        return 0.0
    return x * gsl_sf_bessel_K1_scaled(x) * exp(-x)


cdef inline double _xk0(double x) nogil:
    if x > 746.0:
        return 0.0
    return x * gsl_sf_bessel_K0_scaled(x) * exp(-x)


cdef inline double _solve_one(double v, double tol) nogil:
    """x such that x*K1(x) = v, v in (0, 1); safeguarded Newton."""
    cdef double x, u, denom, vt, lo, hi, w, resid, dw, xn
    cdef int it

    if v > 0.6:
        # near the origin: invert the small-argument CDF form r(1-2g-ln r)
        u = 1.0 - v
        if u < 1e-300:
            u = 1e-300
        x = 1e-4
        for it in range(5):
            denom = 1.0 - TWO_GAMMA - log(x)
            if denom < 1e-2:
                denom = 1e-2
            x = u / denom
        x = 2.0 * sqrt(x)
    else:
        # tail: x*K1(x) ~ sqrt(pi*x/2)*exp(-x)
        vt = v if v > 1e-300 else 1e-300
        x = -log(vt)
        if x < 0.5:
            x = 0.5
        for it in range(4):
            xn = log(sqrt(M_PI * x / 2.0) / vt)
            x = xn if xn > 1e-2 else 1e-2

    lo = 0.0
    hi = INFINITY
    for it in range(80):
        w = _xk1(x)
        resid = w - v
        if fabs(resid) <= tol:
            return x
        if resid > 0.0:   # x*K1(x) decreasing: x too small
            lo = x
        else:
            hi = x
        dw = -_xk0(x)
        xn = x - resid / dw
        if not (xn > lo and xn < hi):   # out of bracket or nan
            if hi < INFINITY:
                xn = 0.5 * (lo + hi)
            else:
                xn = 2.0 * (lo if lo > 1.0 else 1.0)
        if hi < INFINITY and (hi - lo) <= 4.0 * EPS * (hi if hi > 1.0 else 1.0):
            return x
        x = xn
    return x


def j0(x):
    cdef double[::1] xi = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(xi.shape[0], dtype=np.float64)
    cdef double[::1] oi = out
    cdef Py_ssize_t i, n = xi.shape[0]
    with nogil:
        for i in range(n):
            oi[i] = gsl_sf_bessel_J0(fabs(xi[i]))
    return out


def k1(x):
    cdef double[::1] xi = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(xi.shape[0], dtype=np.float64)
    cdef double[::1] oi = out
    cdef Py_ssize_t i, n = xi.shape[0]
    cdef double xv
    with nogil:
        for i in range(n):
            xv = xi[i]
            if xv < K1_INF_CUTOFF:
                oi[i] = INFINITY
            elif xv > K1_ZERO_CUTOFF:
                oi[i] = 0.0
            else:
                oi[i] = gsl_sf_bessel_K1_scaled(xv) * exp(-xv)
    return out


def xk1(x):
    cdef double[::1] xi = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(xi.shape[0], dtype=np.float64)
    cdef double[::1] oi = out
    cdef Py_ssize_t i, n = xi.shape[0]
    with nogil:
        for i in range(n):
            oi[i] = _xk1(xi[i])
    return out


def product_cdf(r):
    cdef double[::1] ri = np.ascontiguousarray(r, dtype=np.float64)
    out = np.empty(ri.shape[0], dtype=np.float64)
    cdef double[::1] oi = out
    cdef Py_ssize_t i, n = ri.shape[0]
    with nogil:
        for i in range(n):
            oi[i] = 1.0 - _xk1(2.0 * sqrt(ri[i]))
    return out


def solve_xk1(v, tol):
    cdef double[::1] vi = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t i, n = vi.shape[0]
    tol_arr = np.array(np.broadcast_to(tol, (n,)), dtype=np.float64)
    cdef double[::1] ti = tol_arr
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] oi = out
    with nogil:
        for i in range(n):
            oi[i] = _solve_one(vi[i], ti[i])
    return out
