"""Special functions backing the filter and kernel evaluations.

Error function, Dawson integral and imaginary error function, modified
Bessel functions of integer and half-integer order, and Gamma at
half-integer arguments.  Everything here is pure and reentrant.
"""

import math
from dataclasses import dataclass

from . import _core

SQRT_PI = 1.7724538509055160273

# erfi(x) = (2/sqrt(pi)) exp(x^2) D(x); exp(x^2) overflows past x ~ 26.6
ERFI_MAX_ARG = 26.0

# half-integer orders: upward recurrence from the sinh/cosh seeds is only
# safe in the growth regime x >= 2*nu; below that the ascending series
# (all terms positive) is used instead
_RECURRENCE_MARGIN = 1.0


@dataclass(frozen=True)
class HalfIntegerOrder:
    """Bessel order nu expressed as 2*nu so that half-integers stay exact."""

    twice_order: int

    def __post_init__(self):
        if self.twice_order < 0:
            raise ValueError(f"order must be >= 0, got {self.twice_order / 2}")

    @classmethod
    def from_value(cls, nu: float) -> "HalfIntegerOrder":
        twice = round(2 * nu)
        if abs(2 * nu - twice) > 1e-12:
            raise ValueError(f"{nu} is not an integer or half-integer")
        return cls(twice)

    @property
    def value(self) -> float:
        return self.twice_order / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice_order % 2 == 0


def erf(x: float) -> float:
    """Error function; absolute error below 1e-12.

    Maclaurin series for |x| <= 2, continued-fraction complement above.
    """
    if not math.isfinite(x):
        raise ValueError(f"erf requires a finite argument, got {x}")
    return _core.erf(float(x))


def dawson(x: float) -> float:
    """Dawson integral D(x) = exp(-x^2) * int_0^x exp(t^2) dt."""
    if not math.isfinite(x):
        raise ValueError(f"dawson requires a finite argument, got {x}")
    return _core.dawson(float(x))


def erfi(x: float) -> float:
    """Imaginary error function, computed as (2/sqrt(pi)) exp(x^2) D(x).

    Routing through the Dawson function avoids the catastrophic
    cancellation of exp(-x^2)*erfi(x) at large x; the explicit exp(x^2)
    here still bounds the domain to |x| <= 26.
    """
    if not math.isfinite(x):
        raise ValueError(f"erfi requires a finite argument, got {x}")
    if abs(x) > ERFI_MAX_ARG:
        raise ValueError(
            f"erfi overflows double range for |x| > {ERFI_MAX_ARG}, got {x}"
        )
    return (2.0 / SQRT_PI) * math.exp(x * x) * _core.dawson(float(x))


def gamma_half(k: int) -> float:
    """Gamma(k + 1/2) = sqrt(pi) * (2k)! / (2^(2k) k!).

    Evaluated as the running product sqrt(pi) * prod_{i<k} (i + 1/2), which
    never overflows an intermediate for k <= 170 and makes the ratio
    gamma_half(k+1) / gamma_half(k) = k + 1/2 exact in floating point.
    """
    if k < 0:
        raise ValueError(f"gamma_half requires k >= 0, got {k}")
    if k > 170:
        raise ValueError(f"gamma_half overflows double range for k > 170, got {k}")
    g = SQRT_PI
    for i in range(k):
        g *= i + 0.5
    return g


def _bessel_i_series(twice_order: int, x: float, scaled: bool) -> float:
    # ascending series; every term is positive so there is no cancellation
    if twice_order % 2 == 0:
        nu = twice_order // 2
        prefactor = (0.5 * x) ** nu / math.factorial(nu)
    else:
        m = (twice_order - 1) // 2  # nu = m + 1/2, Gamma(nu + 1) = gamma_half(m + 1)
        prefactor = (0.5 * x) ** (twice_order / 2.0) / gamma_half(m + 1)
    q = 0.25 * x * x
    half_nu = twice_order / 2.0
    term = 1.0
    acc = 1.0
    for k in range(1, 700):
        term *= q / (k * (k + half_nu))
        acc += term
        if term < 1e-17 * acc:
            break
    value = prefactor * acc
    return value * math.exp(-x) if scaled else value


def _bessel_i_scaled_hankel(twice_order: int, x: float) -> float:
    # exp(-x) I_nu(x) ~ (2 pi x)^(-1/2) sum_k (-1)^k c_k(nu) / x^k;
    # rapidly convergent for the orders used here once x is large
    four_nu_sq = float(twice_order * twice_order)
    term = 1.0
    acc = 1.0
    for k in range(1, 40):
        term *= -(four_nu_sq - (2 * k - 1) ** 2) / (k * 8.0 * x)
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
    return acc / math.sqrt(2.0 * math.pi * x)


def _bessel_i_half_recurrence(twice_order: int, x: float, scaled: bool) -> float:
    # upward recurrence from the closed sinh/cosh seeds (exp-scaled forms
    # keep it overflow-free); only called in the growth regime
    c = math.sqrt(2.0 / (math.pi * x))
    if scaled:
        em = math.exp(-2.0 * x)
        below = c * 0.5 * (1.0 + em)  # e^-x I_{-1/2}
        current = c * 0.5 * (1.0 - em)  # e^-x I_{1/2}
    else:
        below = c * math.cosh(x)
        current = c * math.sinh(x)
    nu = 0.5
    while round(2 * nu) < twice_order:
        below, current = current, below - (2.0 * nu / x) * current
        nu += 1.0
    return current


def _bessel_i_impl(twice_order: int, x: float, scaled: bool) -> float:
    if x < 0:
        raise ValueError(f"bessel_i requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0 if twice_order == 0 else 0.0
    if twice_order % 2 == 1 and x >= _RECURRENCE_MARGIN * twice_order:
        return _bessel_i_half_recurrence(twice_order, x, scaled)
    if scaled and x > 600.0:
        return _bessel_i_scaled_hankel(twice_order, x)
    return _bessel_i_series(twice_order, x, scaled)


def bessel_i(order: HalfIntegerOrder, x: float) -> float:
    """Modified Bessel function I_nu(x) for nu = 0, 1/2, 1, 3/2, ...

    Half-odd orders use the closed sinh/cosh forms with upward recurrence
    where that is stable (x comparable to or above the order) and the
    ascending series otherwise; integer orders always use the series.
    """
    return _bessel_i_impl(order.twice_order, float(x), scaled=False)


def bessel_i_scaled(order: HalfIntegerOrder, x: float) -> float:
    """exp(-x) * I_nu(x); stays finite where I_nu alone would overflow."""
    return _bessel_i_impl(order.twice_order, float(x), scaled=True)
