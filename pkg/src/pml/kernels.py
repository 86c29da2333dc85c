"""Filtering functions and sampling kernels for exponential phase moments.

``filter_F`` is the radial weight that maps a quasidistribution at one
ordering to the phase moments at a more-smoothed ordering; ``kernel_base``
is the radial part of the sampling kernel averaged over homodyne data.
Both come with independent truncated-series twins used for verification.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .specfun import HalfIntegerOrder, bessel_i_scaled, gamma_half

SQRT_PI = 1.7724538509055160273

# construction guard: the ordering bound s < s_eta is strict, and at the
# boundary the kernel scale vanishes
BOUNDARY_GUARD = 1e-9

SERIES_MAX_ARG = 6.0
SERIES_MIN_TOL = 1e-14


class OrderingBoundError(ValueError):
    """Requested ordering parameter violates s < -(1 - eta)/eta."""


@dataclass(frozen=True)
class OrderingContext:
    """Ordering parameter, detection efficiency, and derived kernel scale.

    ``s_eta = -(1 - eta)/eta`` is the loss bound, ``s_eff = s - s_eta`` the
    effective ordering seen by the loss-compensated kernels, and ``scale``
    the divisor turning a recorded quadrature value into the kernel
    argument ``u = x / scale``.
    """

    s: float
    eta: float
    s_eta: float = field(init=False)
    s_eff: float = field(init=False)
    scale: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        s_eta = -(1.0 - self.eta) / self.eta
        if self.s >= s_eta - BOUNDARY_GUARD:
            raise OrderingBoundError(
                f"ordering parameter s = {self.s} violates the detection bound "
                f"s < {s_eta:.6g} for eta = {self.eta}"
            )
        object.__setattr__(self, "s_eta", s_eta)
        object.__setattr__(self, "s_eff", self.s - s_eta)
        object.__setattr__(self, "scale", math.sqrt(self.eta * (-(self.s - s_eta))))


def filter_F(l: int, u: float) -> float:
    """Filtering function F_l(u) via the half/integer Bessel closed form.

    F_l(u) = sqrt(pi) (u/2) e^(-u^2/2) [I_((|l|-1)/2) + I_((|l|+1)/2)](u^2/2);
    rises from 0 at u = 0 to 1 as u -> inf.
    """
    if l == 0:
        raise ValueError("filter_F is defined for l != 0 only")
    if u < 0:
        raise ValueError(f"filter_F requires u >= 0, got {u}")
    if u == 0.0:
        return 0.0
    al = abs(l)
    x = 0.5 * u * u
    lo = bessel_i_scaled(HalfIntegerOrder(al - 1), x)
    hi = bessel_i_scaled(HalfIntegerOrder(al + 1), x)
    return SQRT_PI * 0.5 * u * (lo + hi)


def filter_series_coefficient(n: int, l: int) -> float:
    """Taylor coefficient f_{n,l} of F_l(u) = sum_n f_{n,l} u^(2n+|l|)."""
    al = abs(l)
    if al == 0:
        raise ValueError("filter coefficients are defined for l != 0 only")
    if al % 2 == 0:
        gam = math.factorial(n + al // 2 - 1)
    else:
        gam = gamma_half(n + (al - 1) // 2)
    sign = -1.0 if n % 2 else 1.0
    return 0.5 * al * sign * gam / (math.factorial(n) * math.factorial(n + al))


def filter_F_series(l: int, u: float, tol: float = 1e-12) -> float:
    """Truncated Taylor series of F_l; independent check of ``filter_F``.

    The series alternates, and for u above ~4 the largest intermediate
    terms start to eat into the double-precision budget, hence the hard
    u <= 6 guard.
    """
    if l == 0:
        raise ValueError("filter_F_series is defined for l != 0 only")
    if not 0.0 <= u <= SERIES_MAX_ARG:
        raise ValueError(
            f"filter_F_series requires 0 <= u <= {SERIES_MAX_ARG} "
            f"(alternating-series cancellation), got {u}"
        )
    if tol < SERIES_MIN_TOL:
        raise ValueError(f"tol must be >= {SERIES_MIN_TOL}, got {tol}")
    if u == 0.0:
        return 0.0
    al = abs(l)
    u2 = u * u
    term = filter_series_coefficient(0, l) * u**al
    acc = term
    for n in range(1, 600):
        # f_{n+1,l} / f_{n,l} = -(n + l/2) / ((n + 1)(n + l + 1))
        term *= -(n - 1 + 0.5 * al) / (n * (n + al)) * u2
        acc += term
        if abs(term) < tol * abs(acc):
            return acc
    raise RuntimeError(f"filter series did not converge for l={l}, u={u}")


def kernel_base(l: int, u: float) -> float:
    """Radial kernel K_l(u) in closed form, order prefactors included.

    Odd l:  (-1)^((l-1)/2) * l * erf(u)/4.
    Even l: (-1)^(l/2-1) * (l/2) * K2(u), with
    K2(u) = (2/pi) * int_0^u D(y) dy.
    """
    if l < 1:
        raise ValueError(f"kernel_base requires l >= 1, got {l}")
    if l % 2 == 1:
        sign = -1.0 if ((l - 1) // 2) % 2 else 1.0
        return sign * l * 0.25 * _core.erf(float(u))
    sign = -1.0 if (l // 2 - 1) % 2 else 1.0
    return sign * (l // 2) * _core.k2(float(u))


def kernel_series(l: int, u: float, tol: float = 1e-12) -> float:
    """Raw Taylor series (l/4pi) sum_n (-1)^n Gamma(n+l/2)/(2n+l)! (2u)^(2n+l).

    Sums the series as published; it differs from ``kernel_base`` for
    l >= 3 by a removable polynomial of degree below l.
    """
    if l < 1:
        raise ValueError(f"kernel_series requires l >= 1, got {l}")
    if abs(u) > SERIES_MAX_ARG:
        raise ValueError(
            f"kernel_series requires |u| <= {SERIES_MAX_ARG} "
            f"(alternating-series cancellation), got {u}"
        )
    if tol < SERIES_MIN_TOL:
        raise ValueError(f"tol must be >= {SERIES_MIN_TOL}, got {tol}")
    if u == 0.0:
        return 0.0
    if l % 2 == 0:
        gam0 = math.factorial(l // 2 - 1)
    else:
        gam0 = gamma_half((l - 1) // 2)
    two_u = 2.0 * u
    term = gam0 * two_u**l / math.factorial(l)
    acc = term
    four_u2 = two_u * two_u
    for n in range(1, 600):
        # ratio of consecutive terms: -(n-1+l/2) (2u)^2 / ((2n+l-1)(2n+l))
        term *= -(n - 1 + 0.5 * l) * four_u2 / ((2 * n + l - 1) * (2 * n + l))
        acc += term
        if abs(term) < tol * abs(acc):
            return acc * l / (4.0 * math.pi)
    raise RuntimeError(f"kernel series did not converge for l={l}, u={u}")


def sampling_kernel(l: int, x: float, theta: float, ctx: OrderingContext) -> complex:
    """Loss-compensated sampling kernel K_l(x/scale) * exp(i l theta).

    Negative l returns the complex conjugate of the kernel at |l|.
    """
    if l == 0:
        raise ValueError("no sampling kernel exists for l = 0 (Psi_0 is 1 by trace)")
    radial = kernel_base(abs(l), x / ctx.scale)
    return radial * complex(math.cos(l * theta), math.sin(l * theta))


def wigner_limit_kernel(l: int, x: float, theta: float) -> complex:
    """Large-|x| limit of the kernels (ordering dependence washed out).

    Odd |l| = 2k+1: (1/4)(2k+1)(-1)^k sgn(x) e^(i l theta);
    even |l| = 2k:  (1/pi) k (-1)^(k-1) ln|x| e^(i l theta).
    """
    if l == 0:
        raise ValueError("no sampling kernel exists for l = 0")
    al = abs(l)
    if al % 2 == 1:
        k = (al - 1) // 2
        sign = -1.0 if k % 2 else 1.0
        radial = 0.25 * al * sign * math.copysign(1.0, x) if x != 0.0 else 0.0
    else:
        if x == 0.0:
            raise ValueError("even-order Wigner-limit kernel is singular at x = 0")
        k = al // 2
        sign = -1.0 if (k - 1) % 2 else 1.0
        radial = k * sign * math.log(abs(x)) / math.pi
    return radial * complex(math.cos(l * theta), math.sin(l * theta))


def radial_kernel_values(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (K1(u), K2(u)) for estimator hot paths.

    K1 feeds all odd moments, K2 all even ones; evaluating both once per
    sample and reusing them across l is what makes spectrum estimation
    O(samples) instead of O(samples * l_max).
    """
    u = np.asarray(u, dtype=np.float64)
    return 0.25 * _core.erf(u), _core.k2(u)


def kernel_prefactor(l: int) -> float:
    """Sign/order prefactor multiplying K1 (odd l) or K2 (even l)."""
    al = abs(l)
    if al % 2 == 1:
        return float(al) * (-1.0 if ((al - 1) // 2) % 2 else 1.0)
    return float(al // 2) * (-1.0 if (al // 2 - 1) % 2 else 1.0)
