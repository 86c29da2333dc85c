"""Parametric state models with closed-form quadrature and phase statistics.

This is the oracle layer: every quantity the sampling pipeline estimates
has an exact counterpart here (quasidistributions, quadrature laws, phase
distributions and exponential phase moments for squeezed vacuum, coherent
and Fock states).
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import filter_F

TWO_PI = 2.0 * math.pi

KINDS = ("squeezed_vacuum", "coherent", "fock", "displaced_fock")

# Fock quadrature tables: grid step and support pad (in vacuum units) per
# the sampling design; resolution of the inverse-CDF lookup in cumulative
# probability
FOCK_GRID_STEP = 0.01
FOCK_SUPPORT_PAD = 8.0
FOCK_INV_CDF_RESOLUTION = 1e-4


@dataclass(frozen=True)
class StateSpec:
    """Parametric description of the signal state.

    Only the fields relevant to ``kind`` are read: squeezed vacuum uses
    ``zeta_modulus``/``zeta_phase``, coherent uses ``xi``, Fock uses ``n``,
    displaced Fock uses ``n`` and ``displacement``.
    """

    kind: str
    zeta_modulus: float = 0.0
    zeta_phase: float = 0.0
    xi: complex = 0j
    n: int = 0
    displacement: complex = 0j

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}; expected one of {KINDS}")
        if self.zeta_modulus < 0:
            raise ValueError(f"|zeta| must be >= 0, got {self.zeta_modulus}")
        if not 0.0 <= self.zeta_phase < TWO_PI:
            raise ValueError(f"zeta phase must lie in [0, 2pi), got {self.zeta_phase}")
        if self.n < 0:
            raise ValueError(f"Fock number must be >= 0, got {self.n}")

    @classmethod
    def squeezed_vacuum(cls, zeta: float, psi: float = 0.0) -> "StateSpec":
        return cls(kind="squeezed_vacuum", zeta_modulus=abs(zeta), zeta_phase=psi % TWO_PI)

    @classmethod
    def coherent(cls, xi: complex) -> "StateSpec":
        return cls(kind="coherent", xi=complex(xi))

    @classmethod
    def fock(cls, n: int) -> "StateSpec":
        return cls(kind="fock", n=int(n))

    @classmethod
    def displaced_fock(cls, n: int, displacement: complex) -> "StateSpec":
        return cls(kind="displaced_fock", n=int(n), displacement=complex(displacement))

    def label(self) -> str:
        if self.kind == "squeezed_vacuum":
            return f"squeezed_vacuum(zeta={self.zeta_modulus:.17g},psi={self.zeta_phase:.17g})"
        if self.kind == "coherent":
            return f"coherent(xi={self.xi.real:.17g}{self.xi.imag:+.17g}j)"
        if self.kind == "fock":
            return f"fock(n={self.n})"
        return (
            f"displaced_fock(n={self.n},"
            f"alpha={self.displacement.real:.17g}{self.displacement.imag:+.17g}j)"
        )


@dataclass(frozen=True)
class GaussianMoments:
    """B_s, C and psi entering the squeezed-vacuum phase distribution."""

    b_s: float
    c: float
    psi: float

    def __post_init__(self):
        if self.b_s <= 0:
            raise ValueError(f"B_s must be positive, got {self.b_s}")

    @classmethod
    def for_squeezed_vacuum(cls, state: StateSpec, s: float) -> "GaussianMoments":
        if state.kind != "squeezed_vacuum":
            raise ValueError(f"GaussianMoments requires a squeezed vacuum, got {state.kind}")
        z = state.zeta_modulus
        return cls(
            b_s=math.sinh(z) ** 2 + 0.5 * (1.0 - s),
            c=0.5 * math.sinh(2.0 * z),
            psi=state.zeta_phase,
        )


@dataclass(frozen=True)
class TabulatedQuasiDist:
    """Quasidistribution sampled on a uniform (q, p) grid."""

    q_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.q_axis.size, self.p_axis.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.q_axis.size}, {self.p_axis.size})"
            )

    @property
    def step(self) -> float:
        return float(self.q_axis[1] - self.q_axis[0])

    def integral(self) -> float:
        return float(self.values.sum() * self.step * (self.p_axis[1] - self.p_axis[0]))


def _squeezed_principal_variances(state: StateSpec, s: float) -> tuple[float, float]:
    z = state.zeta_modulus
    return 0.5 * (math.exp(2.0 * z) - s), 0.5 * (math.exp(-2.0 * z) - s)


def quasidist_eval(state: StateSpec, q: float, p: float, s: float) -> float:
    """s-parametrized quasidistribution of a Gaussian state at (q, p).

    Normalized so that the integral over dq dp is 1 (the convention under
    which the radial integral yields the phase distribution and the line
    marginal yields the quadrature law).  Coherent states are shifted round
    Gaussians of per-axis variance (1-s)/2; squeezed vacuum is a centred
    Gaussian with principal variances (e^(+-2|zeta|) - s)/2 along axes
    rotated by psi/2.
    """
    if s > 0:
        raise ValueError(f"quasidistributions are evaluated for s <= 0 only, got s = {s}")
    if state.kind == "coherent":
        alpha = complex(q, p) / math.sqrt(2.0)
        d2 = abs(alpha - state.xi) ** 2  # = ((q - q0)^2 + (p - p0)^2) / 2
        return 1.0 / ((1.0 - s) * math.pi) * math.exp(-2.0 * d2 / (1.0 - s))
    if state.kind == "squeezed_vacuum":
        var_a, var_b = _squeezed_principal_variances(state, s)
        half_psi = 0.5 * state.zeta_phase
        qr = q * math.cos(half_psi) + p * math.sin(half_psi)
        pr = -q * math.sin(half_psi) + p * math.cos(half_psi)
        norm = 1.0 / (TWO_PI * math.sqrt(var_a * var_b))
        return norm * math.exp(-0.5 * qr * qr / var_a - 0.5 * pr * pr / var_b)
    raise ValueError(f"quasidist_eval supports Gaussian kinds only, got {state.kind}")


def tabulate_quasidist(state: StateSpec, s: float, extent: float, step: float,
                       center: tuple[float, float] = (0.0, 0.0)) -> TabulatedQuasiDist:
    """Sample the quasidistribution on a centred uniform grid."""
    if s > 0:
        raise ValueError(f"quasidistributions are evaluated for s <= 0 only, got s = {s}")
    n = int(round(2.0 * extent / step)) + 1
    q_axis = center[0] + (np.arange(n) - (n - 1) / 2.0) * step
    p_axis = center[1] + (np.arange(n) - (n - 1) / 2.0) * step
    qq = q_axis[:, None]
    pp = p_axis[None, :]
    if state.kind == "coherent":
        d2 = 0.5 * ((qq - math.sqrt(2.0) * state.xi.real) ** 2
                    + (pp - math.sqrt(2.0) * state.xi.imag) ** 2)
        vals = 1.0 / ((1.0 - s) * math.pi) * np.exp(-2.0 * d2 / (1.0 - s))
    elif state.kind == "squeezed_vacuum":
        var_a, var_b = _squeezed_principal_variances(state, s)
        half_psi = 0.5 * state.zeta_phase
        qr = qq * math.cos(half_psi) + pp * math.sin(half_psi)
        pr = -qq * math.sin(half_psi) + pp * math.cos(half_psi)
        norm = 1.0 / (TWO_PI * math.sqrt(var_a * var_b))
        vals = norm * np.exp(-0.5 * qr * qr / var_a - 0.5 * pr * pr / var_b)
    else:
        raise ValueError(f"tabulate_quasidist supports Gaussian kinds only, got {state.kind}")
    return TabulatedQuasiDist(q_axis=q_axis, p_axis=p_axis, values=vals)


def smooth_quasidist(grid: TabulatedQuasiDist, s1: float, s2: float) -> TabulatedQuasiDist:
    """Gaussian smoothing taking a tabulated quasidistribution from s1 to s2.

    Discrete convolution with exp(-(dq^2+dp^2)/(s1-s2)) / (pi (s1-s2)),
    separable along the two axes.  The grid must resolve the kernel
    (width >= 2 steps) and cover the state's support.
    """
    if s2 >= s1:
        raise ValueError(f"smoothing requires s2 < s1, got s1 = {s1}, s2 = {s2}")
    ds = s1 - s2
    h = grid.step
    sigma = math.sqrt(0.5 * ds)  # per-axis std dev of the smoothing kernel
    if sigma < 2.0 * h:
        raise ValueError(
            f"grid too coarse: kernel width {sigma:.3g} is below two grid steps ({2 * h:.3g})"
        )
    half_taps = min(int(math.ceil(8.0 * sigma / h)), grid.q_axis.size - 1)
    offsets = np.arange(-half_taps, half_taps + 1) * h
    taps = np.exp(-offsets * offsets / ds) * (h / math.sqrt(math.pi * ds))
    smoothed = np.apply_along_axis(np.convolve, 0, grid.values, taps, "same")
    smoothed = np.apply_along_axis(np.convolve, 1, smoothed, taps, "same")
    return TabulatedQuasiDist(q_axis=grid.q_axis, p_axis=grid.p_axis, values=smoothed)


def quadrature_gaussian_params(state: StateSpec, theta: float, eta: float) -> tuple[float, float]:
    """(mean, std) of the recorded quadrature for the Gaussian kinds."""
    if state.kind == "coherent":
        mean = math.sqrt(2.0 * eta) * abs(state.xi) * math.cos(theta - cmath.phase(state.xi))
        return mean, math.sqrt(0.5)
    if state.kind == "squeezed_vacuum":
        z = state.zeta_modulus
        ang = theta - 0.5 * state.zeta_phase
        var_ideal = 0.5 * (
            math.exp(2.0 * z) * math.cos(ang) ** 2 + math.exp(-2.0 * z) * math.sin(ang) ** 2
        )
        return 0.0, math.sqrt(eta * var_ideal + 0.5 * (1.0 - eta))
    raise ValueError(f"not a Gaussian quadrature law: {state.kind}")


def _hermite_density(n: int, x: np.ndarray) -> np.ndarray:
    # |psi_n(x)|^2 with psi_n the n-th Hermite function, vacuum variance 1/2
    psi_prev = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n == 0:
        return psi_prev * psi_prev
    psi = math.sqrt(2.0) * x * psi_prev
    for k in range(2, n + 1):
        psi_prev, psi = psi, math.sqrt(2.0 / k) * x * psi - math.sqrt((k - 1) / k) * psi_prev
    return psi * psi


@dataclass(frozen=True)
class _FockTable:
    x: np.ndarray
    pdf: np.ndarray
    inv_cdf_p: np.ndarray
    inv_cdf_x: np.ndarray


@lru_cache(maxsize=64)
def _fock_table(n: int, eta: float) -> _FockTable:
    """Tabulated (and loss-smoothed) Fock quadrature density with inverse CDF."""
    support = math.sqrt(2.0 * n + 1.0) + FOCK_SUPPORT_PAD
    m = int(round(2.0 * support / FOCK_GRID_STEP)) + 1
    x = (np.arange(m) - (m - 1) / 2.0) * FOCK_GRID_STEP
    ideal = _hermite_density(n, x)
    if eta < 1.0:
        # w(x; eta) = int w(x') exp(-(x - sqrt(eta) x')^2/(1-eta)) dx' / sqrt(pi (1-eta))
        diff = x[:, None] - math.sqrt(eta) * x[None, :]
        weight = np.exp(-diff * diff / (1.0 - eta)) / math.sqrt(math.pi * (1.0 - eta))
        pdf = weight @ ideal * FOCK_GRID_STEP
    else:
        pdf = ideal
    pdf = pdf / (pdf.sum() * FOCK_GRID_STEP)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * FOCK_GRID_STEP)])
    cdf /= cdf[-1]
    n_p = int(round(1.0 / FOCK_INV_CDF_RESOLUTION)) + 1
    p_grid = np.linspace(0.0, 1.0, n_p)
    # cdf is monotone up to flat tails; np.interp takes the leftmost match
    inv_x = np.interp(p_grid, cdf, x)
    return _FockTable(x=x, pdf=pdf, inv_cdf_p=p_grid, inv_cdf_x=inv_x)


def _displacement_shift(state: StateSpec, theta: float, eta: float) -> float:
    d = state.displacement
    return math.sqrt(2.0 * eta) * abs(d) * math.cos(theta - cmath.phase(d))


def quadrature_pdf(state: StateSpec, theta: float, x, eta: float = 1.0):
    """Probability density of the recorded quadrature at phase ``theta``.

    Detection losses are folded in at the stated efficiency; the output is
    normalized to unit integral over x.  Accepts scalar or array ``x``.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    arr = np.asarray(x, dtype=np.float64)
    if state.kind in ("coherent", "squeezed_vacuum"):
        mean, std = quadrature_gaussian_params(state, theta, eta)
        out = np.exp(-0.5 * ((arr - mean) / std) ** 2) / (std * math.sqrt(TWO_PI))
    elif state.kind in ("fock", "displaced_fock"):
        table = _fock_table(state.n, eta)
        shift = _displacement_shift(state, theta, eta) if state.kind == "displaced_fock" else 0.0
        out = np.interp(arr - shift, table.x, table.pdf, left=0.0, right=0.0)
    else:  # pragma: no cover - guarded by StateSpec
        raise ValueError(f"unsupported state kind {state.kind}")
    return float(out) if arr.ndim == 0 else out


def exact_phase_distribution(state: StateSpec, s: float, theta) -> float | np.ndarray:
    """Closed-form phase distribution of the squeezed vacuum.

    P_s(theta) = (1/2pi) sqrt(B^2 - C^2) / (B - C cos(2 theta - psi)),
    valid while B > C (always true for s <= 0 at finite squeezing).
    """
    if state.kind != "squeezed_vacuum":
        raise ValueError(f"exact_phase_distribution supports squeezed_vacuum, got {state.kind}")
    gm = GaussianMoments.for_squeezed_vacuum(state, s)
    if gm.b_s <= gm.c:
        raise ValueError(
            f"B_s = {gm.b_s:.6g} <= C = {gm.c:.6g}: ordering s = {s} too large for this state"
        )
    arr = np.asarray(theta, dtype=np.float64)
    num = math.sqrt(gm.b_s**2 - gm.c**2) / TWO_PI
    out = num / (gm.b_s - gm.c * np.cos(2.0 * arr - gm.psi))
    return float(out) if arr.ndim == 0 else out


def exact_phase_moment(state: StateSpec, l: int, s: float) -> complex:
    """Exponential phase moment Psi_l(s) in closed form.

    Squeezed vacuum: geometric in the even index, zero for odd; coherent:
    filter function at the scaled amplitude; Fock: delta at l = 0.
    Negative l returns the conjugate.
    """
    if s >= 1:
        raise ValueError(f"phase moments require s < 1, got {s}")
    if l == 0:
        if state.kind not in ("squeezed_vacuum", "coherent", "fock"):
            raise ValueError(f"no closed-form phase moments for {state.kind}")
        return 1.0 + 0j
    if state.kind == "fock":
        return 0j
    if state.kind == "coherent":
        amp = abs(state.xi)
        if amp == 0.0:
            return 0j
        value = filter_F(abs(l), math.sqrt(2.0 / (1.0 - s)) * amp)
        return value * cmath.exp(1j * l * cmath.phase(state.xi))
    if state.kind == "squeezed_vacuum":
        if l % 2 == 1:
            return 0j
        gm = GaussianMoments.for_squeezed_vacuum(state, s)
        if gm.c == 0.0:  # vacuum: uniform phase
            return 0j
        ratio = gm.b_s / gm.c
        base = ratio - math.sqrt(ratio * ratio - 1.0)
        m = l // 2
        return base ** abs(m) * cmath.exp(1j * m * gm.psi)
    raise ValueError(f"no closed-form phase moments for {state.kind}")


def coherent_density_matrix(xi: complex, cutoff: int) -> np.ndarray:
    """Fock-basis density matrix of |xi>, indices 0..cutoff inclusive."""
    if cutoff < 1:
        raise ValueError(f"cutoff must be a positive integer, got {cutoff}")
    n = np.arange(cutoff + 1)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, cutoff + 1))]))
    amp_mag = np.exp(n * math.log(abs(xi)) - 0.5 * log_fact) if xi != 0 else np.where(n == 0, 1.0, 0.0)
    phase = np.exp(1j * n * cmath.phase(xi)) if xi != 0 else np.ones(cutoff + 1)
    amps = amp_mag * phase * math.exp(-0.5 * abs(xi) ** 2)
    return np.outer(amps, amps.conj())
