"""Independent numeric oracles shared by the test modules.

Everything here deliberately avoids the library's own evaluation paths:
plain adaptive Simpson quadrature and directly-summed series, so that
agreement with the package is a genuine two-route check.
"""

import math


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-12, max_depth: int = 60) -> float:
    """Recursive adaptive Simpson integration of a scalar callable."""

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        lm = 0.5 * (x0 + xm)
        rm = 0.5 * (xm + x2)
        fl = f(lm)
        fr = f(rm)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(x0, xm, f0, fl, f1, left, eps / 2.0, depth - 1) + recurse(
            xm, x2, f1, fr, f2, right, eps / 2.0, depth - 1
        )

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


def erf_series(x: float) -> float:
    """Maclaurin series of erf summed with compensated accumulation."""
    terms = []
    term = x
    n = 0
    while abs(term) > 1e-20 * max(1.0, abs(x)):
        terms.append(term / (2 * n + 1))
        n += 1
        term = term * (-x * x) / n
        if n > 200:
            break
    return 2.0 / math.sqrt(math.pi) * math.fsum(terms)


def erfi_series(x: float) -> float:
    """Maclaurin series of erfi (all terms positive for x > 0)."""
    terms = []
    term = x
    n = 0
    while abs(term / (2 * n + 1)) > 1e-20:
        terms.append(term / (2 * n + 1))
        n += 1
        term = term * (x * x) / n
        if n > 400:
            break
    return 2.0 / math.sqrt(math.pi) * math.fsum(terms)


def bessel_i0_series(x: float) -> float:
    """Power series of I_0."""
    terms = [1.0]
    term = 1.0
    for k in range(1, 300):
        term *= (x * x / 4.0) / (k * k)
        terms.append(term)
        if term < 1e-20:
            break
    return math.fsum(terms)


def k2_series(u: float, n_terms: int = 300) -> float:
    """Directly-summed series (1/2pi) sum (-1)^n n! (2u)^(2n+2) / (2n+2)!."""
    terms = []
    z = 2.0 * u
    term = z * z / 2.0
    for n in range(n_terms):
        terms.append(term if n % 2 == 0 else -term)
        term = term * z * z * (n + 1) / ((2 * n + 3) * (2 * n + 4))
    return math.fsum(terms) / (2.0 * math.pi)


def filter_series(l: int, u: float, n_terms: int = 400) -> float:
    """Directly-summed Taylor series of F_l with fsum accumulation."""
    terms = []
    al = abs(l)
    if al % 2 == 0:
        gam = float(math.factorial(al // 2 - 1))
    else:
        gam = math.sqrt(math.pi) * math.factorial(2 * ((al - 1) // 2)) / (
            4 ** ((al - 1) // 2) * math.factorial((al - 1) // 2)
        )
    term = 0.5 * al * gam / math.factorial(al) * u**al
    for n in range(n_terms):
        terms.append(term)
        term = term * (-(n + 0.5 * al)) / ((n + 1) * (n + 1 + al)) * u * u
    return math.fsum(terms)
