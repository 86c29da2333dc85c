# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the numpy backend in ``_pure``.

Scalar loops over the same algorithms with the same branch cuts and
iteration counts; see ``_constants`` for the shared parameters.
"""

from libc.math cimport cos, exp, fabs, log, sqrt

import numpy as np

from . import _constants as _c

cdef double SQRT_PI = 1.7724538509055160273
cdef double TWO_OVER_SQRT_PI = 1.1283791670955125739
cdef double INV_PI = 0.3183098861837906715

cdef double ERF_SERIES_CUT = _c.ERF_SERIES_CUT
cdef double ERF_ONE_CUT = _c.ERF_ONE_CUT
cdef int ERF_SERIES_TERMS = _c.ERF_SERIES_TERMS
cdef double[::1] ERF_CF_EDGES = np.ascontiguousarray([b[0] for b in _c.ERF_CF_BREAKS])
cdef long[::1] ERF_CF_DEPTHS = np.ascontiguousarray([b[1] for b in _c.ERF_CF_BREAKS])
cdef int N_CF_BREAKS = ERF_CF_EDGES.shape[0]

cdef double DAW_SERIES_CUT = _c.DAW_SERIES_CUT
cdef int DAW_SERIES_TERMS = _c.DAW_SERIES_TERMS
cdef double DAW_ASYM_CUT = _c.DAW_ASYM_CUT
cdef int DAW_ASYM_TERMS = _c.DAW_ASYM_TERMS
cdef double DAW_H = _c.DAW_H
cdef int DAW_NMAX = _c.DAW_NMAX
cdef double[::1] DAW_COEFFS = np.ascontiguousarray(_c.DAW_COEFFS)

cdef double K2_SERIES_CUT = _c.K2_SERIES_CUT
cdef int K2_SERIES_TERMS = _c.K2_SERIES_TERMS
cdef double K2_TAIL_CUT = _c.K2_TAIL_CUT
cdef double K2_AT_4 = _c.K2_AT_4
cdef double K2_AT_8 = _c.K2_AT_8
cdef double[::1] K2_GL_NODES = np.ascontiguousarray(_c.K2_GL_NODES)
cdef double[::1] K2_GL_WEIGHTS = np.ascontiguousarray(_c.K2_GL_WEIGHTS)
cdef double[::1] K2_TAIL_COEFFS = np.ascontiguousarray(_c.K2_TAIL_COEFFS)

cdef int N_GL = K2_GL_NODES.shape[0]
cdef int N_TAIL = K2_TAIL_COEFFS.shape[0]


cdef double _erf_scalar(double x) nogil:
    cdef double ax = fabs(x)
    cdef double t2, term, acc, v, f, out
    cdef int n, i, depth
    if ax <= ERF_SERIES_CUT:
        t2 = ax * ax
        term = ax
        acc = ax
        for n in range(1, ERF_SERIES_TERMS):
            term = term * (-t2) / n
            acc = acc + term / (2 * n + 1)
            if fabs(term) < 1e-17 * fabs(acc):
                break
        out = TWO_OVER_SQRT_PI * acc
    elif ax <= ERF_ONE_CUT:
        depth = <int>ERF_CF_DEPTHS[N_CF_BREAKS - 1]
        for i in range(N_CF_BREAKS):
            if ax <= ERF_CF_EDGES[i]:
                depth = <int>ERF_CF_DEPTHS[i]
                break
        v = 0.5 / (ax * ax)
        f = 1.0
        for n in range(depth, 0, -1):
            f = 1.0 + n * v / f
        out = 1.0 - exp(-ax * ax) / (ax * SQRT_PI * f)
    else:
        out = 1.0
    return -out if x < 0.0 else out


cdef double _dawson_scalar(double x) nogil:
    cdef double ax = fabs(x)
    cdef double t2, term, acc, n0, xp, e1, e2, d1, d2, e, v, out
    cdef int n, i, k
    if ax < DAW_SERIES_CUT:
        t2 = ax * ax
        term = ax
        acc = ax
        for n in range(1, DAW_SERIES_TERMS):
            term = term * (-2.0 * t2) / (2 * n + 1)
            acc = acc + term
        out = acc
    elif ax <= DAW_ASYM_CUT:
        n0 = 2.0 * <double><long long>(0.5 * ax / DAW_H + 0.5)
        xp = ax - n0 * DAW_H
        e1 = exp(2.0 * xp * DAW_H)
        e2 = e1 * e1
        d1 = n0 + 1.0
        d2 = n0 - 1.0
        acc = 0.0
        e = e1
        for i in range(DAW_NMAX):
            acc = acc + DAW_COEFFS[i] * (e / d1 + 1.0 / (d2 * e))
            d1 = d1 + 2.0
            d2 = d2 - 2.0
            e = e * e2
        out = (1.0 / SQRT_PI) * exp(-xp * xp) * acc
    else:
        v = 0.5 / (ax * ax)
        term = 1.0
        acc = 1.0
        for k in range(1, DAW_ASYM_TERMS):
            term = term * (2 * k - 1) * v
            acc = acc + term
        out = acc / (2.0 * ax)
    return -out if x < 0.0 else out


cdef double _k2_tail_primitive(double y) nogil:
    cdef double w = 1.0 / (y * y)
    cdef double poly = 0.0
    cdef int i
    for i in range(N_TAIL - 1, -1, -1):
        poly = (poly + K2_TAIL_COEFFS[i]) * w
    return 0.5 * log(y) - poly


cdef double _k2_scalar(double u) nogil:
    cdef double au = fabs(u)
    cdef double z, term, acc, half, mid, out
    cdef int n, i
    if au <= K2_SERIES_CUT:
        z = 4.0 * au * au
        term = z / 2.0
        acc = term
        for n in range(1, K2_SERIES_TERMS):
            term = term * (-z) * n / ((2 * n + 1) * (2 * n + 2))
            acc = acc + term
            if fabs(term) < 1e-17 * fabs(acc):
                break
        out = acc * (0.5 * INV_PI)
    elif au <= K2_TAIL_CUT:
        half = 0.5 * (au - K2_SERIES_CUT)
        mid = 0.5 * (au + K2_SERIES_CUT)
        acc = 0.0
        for i in range(N_GL):
            acc = acc + K2_GL_WEIGHTS[i] * _dawson_scalar(mid + half * K2_GL_NODES[i])
        out = K2_AT_4 + (2.0 * INV_PI) * half * acc
    else:
        out = K2_AT_8 + (2.0 * INV_PI) * (
            _k2_tail_primitive(au) - _k2_tail_primitive(K2_TAIL_CUT)
        )
    return out


def erf(double[::1] x):
    """Error function, elementwise over a 1-D float64 array."""
    cdef Py_ssize_t i, n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i] = _erf_scalar(x[i])
    return out_arr


def dawson(double[::1] x):
    """Dawson integral, elementwise over a 1-D float64 array."""
    cdef Py_ssize_t i, n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i] = _dawson_scalar(x[i])
    return out_arr


def k2(double[::1] x):
    """(2/pi) * int_0^|x| D(y) dy, elementwise over a 1-D float64 array."""
    cdef Py_ssize_t i, n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i] = _k2_scalar(x[i])
    return out_arr
