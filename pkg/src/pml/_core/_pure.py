"""Numpy implementation of the hot elementwise kernels.

All functions take and return 1-D contiguous float64 arrays.  The compiled
backend in ``_speedups.pyx`` mirrors these algorithms loop-for-loop; the two
implementations agree to a few ulp (they may differ at that level because
numpy's vectorized transcendentals and libm are not bit-identical).
"""

import numpy as np

from ._constants import (
    DAW_ASYM_CUT,
    DAW_ASYM_TERMS,
    DAW_COEFFS,
    DAW_H,
    DAW_NMAX,
    DAW_SERIES_CUT,
    DAW_SERIES_TERMS,
    ERF_CF_BREAKS,
    ERF_ONE_CUT,
    ERF_SERIES_BREAKS,
    ERF_SERIES_CUT,
    INV_PI,
    K2_AT_4,
    K2_AT_8,
    K2_GL_NODES,
    K2_GL_WEIGHTS,
    K2_SERIES_BREAKS,
    K2_SERIES_CUT,
    K2_TAIL_COEFFS,
    K2_TAIL_CUT,
    SQRT_PI,
    TWO_OVER_SQRT_PI,
)


def erf(x: np.ndarray) -> np.ndarray:
    """Error function, absolute error below 1e-14."""
    ax = np.abs(x)
    out = np.ones_like(ax)

    lower = 0.0
    for upper, terms in ERF_SERIES_BREAKS:
        small = (ax >= lower) & (ax <= upper)
        if np.any(small):
            t = ax[small]
            t2 = t * t
            term = t.copy()
            acc = t.copy()
            for n in range(1, terms):
                term = term * (-t2) / n
                acc = acc + term / (2 * n + 1)
            out[small] = TWO_OVER_SQRT_PI * acc
        lower = upper

    lower = ERF_SERIES_CUT
    for upper, depth in ERF_CF_BREAKS:
        mid = (ax > lower) & (ax <= min(upper, ERF_ONE_CUT))
        if np.any(mid):
            t = ax[mid]
            # backward evaluation of the Stieltjes continued fraction for
            # erfc(x) * sqrt(pi) * x * exp(x^2) = 1/(1 + v1/(1 + v2/(1 + ...)))
            v = 0.5 / (t * t)
            f = np.ones_like(t)
            for n in range(depth, 0, -1):
                f = 1.0 + n * v / f
            out[mid] = 1.0 - np.exp(-t * t) / (t * SQRT_PI * f)
        lower = upper

    return np.copysign(out, x)


def dawson(x: np.ndarray) -> np.ndarray:
    """Dawson integral D(x) = exp(-x^2) * int_0^x exp(t^2) dt."""
    ax = np.abs(x)
    out = np.empty_like(ax)

    small = ax < DAW_SERIES_CUT
    if np.any(small):
        t = ax[small]
        t2 = t * t
        term = t.copy()
        acc = t.copy()
        for n in range(1, DAW_SERIES_TERMS):
            term = term * (-2.0 * t2) / (2 * n + 1)
            acc = acc + term
        out[small] = acc

    mid = (ax >= DAW_SERIES_CUT) & (ax <= DAW_ASYM_CUT)
    if np.any(mid):
        t = ax[mid]
        n0 = 2.0 * np.floor(0.5 * t / DAW_H + 0.5)
        xp = t - n0 * DAW_H
        e1 = np.exp(2.0 * xp * DAW_H)
        e2 = e1 * e1
        d1 = n0 + 1.0
        d2 = n0 - 1.0
        acc = np.zeros_like(t)
        e = e1.copy()
        for i in range(DAW_NMAX):
            acc = acc + DAW_COEFFS[i] * (e / d1 + 1.0 / (d2 * e))
            d1 = d1 + 2.0
            d2 = d2 - 2.0
            e = e * e2
        out[mid] = (1.0 / SQRT_PI) * np.exp(-xp * xp) * acc

    large = ax > DAW_ASYM_CUT
    if np.any(large):
        t = ax[large]
        v = 0.5 / (t * t)
        term = np.ones_like(t)
        acc = np.ones_like(t)
        for k in range(1, DAW_ASYM_TERMS):
            term = term * (2 * k - 1) * v
            acc = acc + term
        out[large] = acc / (2.0 * t)

    return np.copysign(out, x)


def _k2_tail_primitive(y: np.ndarray) -> np.ndarray:
    """Antiderivative of D on the asymptotic branch, log term included."""
    w = 1.0 / (y * y)
    poly = np.zeros_like(y)
    for c in K2_TAIL_COEFFS[::-1]:
        poly = (poly + c) * w
    return 0.5 * np.log(y) - poly


def k2(u: np.ndarray) -> np.ndarray:
    """Definite integral (2/pi) * int_0^|u| D(y) dy, absolute error < 1e-11."""
    au = np.abs(u)
    out = np.empty_like(au)

    lower = 0.0
    for upper, terms in K2_SERIES_BREAKS:
        small = (au >= lower) & (au <= upper)
        if np.any(small):
            t = au[small]
            z = 4.0 * t * t
            term = z / 2.0
            acc = term.copy()
            for n in range(1, terms):
                term = term * (-z) * n / ((2 * n + 1) * (2 * n + 2))
                acc = acc + term
            out[small] = acc * (0.5 * INV_PI)
        lower = upper

    mid = (au > K2_SERIES_CUT) & (au <= K2_TAIL_CUT)
    if np.any(mid):
        t = au[mid]
        half = 0.5 * (t - K2_SERIES_CUT)
        nodes = (0.5 * (t + K2_SERIES_CUT))[:, None] + half[:, None] * K2_GL_NODES[None, :]
        vals = dawson(nodes.ravel()).reshape(nodes.shape)
        out[mid] = K2_AT_4 + (2.0 * INV_PI) * half * (vals @ K2_GL_WEIGHTS)

    large = au > K2_TAIL_CUT
    if np.any(large):
        t = au[large]
        anchor = _k2_tail_primitive(np.full_like(t, K2_TAIL_CUT))
        out[large] = K2_AT_8 + (2.0 * INV_PI) * (_k2_tail_primitive(t) - anchor)

    return out
