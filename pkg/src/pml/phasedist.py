"""Fourier synthesis of the phase distribution from moment estimates."""

import math
from dataclasses import dataclass

import numpy as np

from .estimator import MomentEstimate

TWO_PI = 2.0 * math.pi

DEFAULT_TRUNCATION = 10
DEFAULT_GRID_SIZE = 512


@dataclass(frozen=True, eq=False)
class PhaseCurve:
    """P_s(theta) tabulated on a uniform grid with its 1-sigma envelope."""

    s: float
    theta_grid: np.ndarray
    values: np.ndarray
    truncation_order: int
    pointwise_err: np.ndarray

    def __post_init__(self):
        if self.theta_grid.shape != self.values.shape or self.values.shape != self.pointwise_err.shape:
            raise ValueError("theta grid, values and error envelope must share one shape")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("curve contains non-finite values")

    def integral(self) -> float:
        """Integral over [0, 2pi); the l = 0 term carries all normalization."""
        return float(self.values.mean() * TWO_PI)


def reconstruct(
    moments: list[MomentEstimate],
    grid_size: int = DEFAULT_GRID_SIZE,
    sigma_window: bool = False,
) -> PhaseCurve:
    """Truncated Fourier sum P(theta) = (1/2pi)[1 + 2 sum Re(Psi_l e^(-il theta))].

    ``moments`` must hold l = 0..L at one common ordering parameter.  No
    smoothing is applied by default, so finite-L ripple is visible exactly
    as sampled; ``sigma_window=True`` applies a Lanczos sigma factor.
    """
    if not moments:
        raise ValueError("no moments supplied")
    if any(m.l < 0 for m in moments):
        raise ValueError("reconstruct expects moments for l >= 0 only")
    by_l = {m.l: m for m in moments}
    top = max(by_l)
    missing = [l for l in range(top + 1) if l not in by_l]
    if missing:
        raise ValueError(f"moment list incomplete: missing l = {missing}")
    s_values = {m.s for m in moments}
    if len(s_values) != 1:
        raise ValueError(f"moments mix ordering parameters: {sorted(s_values)}")
    s = moments[0].s

    theta = TWO_PI * np.arange(grid_size) / grid_size
    acc = np.ones(grid_size)
    var = np.zeros(grid_size)
    for l in range(1, top + 1):
        m = by_l[l]
        window = _sigma_factor(l, top) if sigma_window else 1.0
        cos_l = np.cos(l * theta)
        sin_l = np.sin(l * theta)
        acc += 2.0 * window * (m.value.real * cos_l + m.value.imag * sin_l)
        var += (window * m.stderr_re * cos_l) ** 2 + (window * m.stderr_im * sin_l) ** 2
    values = acc / TWO_PI
    err = np.sqrt(var) / math.pi
    return PhaseCurve(
        s=s, theta_grid=theta, values=values, truncation_order=top, pointwise_err=err
    )


def _sigma_factor(l: int, top: int) -> float:
    x = math.pi * l / (top + 1)
    return math.sin(x) / x


def curve_error_stats(curve: PhaseCurve, exact) -> dict[str, float]:
    """Max-abs and rms deviation of a curve from an exact reference."""
    reference = np.asarray(exact(curve.theta_grid), dtype=np.float64)
    delta = curve.values - reference
    return {
        "max_abs": float(np.max(np.abs(delta))),
        "rms": float(np.sqrt(np.mean(delta * delta))),
    }


def write_curve_csv(curve: PhaseCurve, path, comments: tuple[str, ...] = ()) -> None:
    """Write the curve as ``theta,p,perr`` rows with comment metadata."""
    lines = [f"# {c}" for c in comments]
    lines.append("theta,p,perr")
    for t, p, e in zip(curve.theta_grid, curve.values, curve.pointwise_err):
        lines.append(f"{t:.17g},{p:.17g},{e:.17g}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
