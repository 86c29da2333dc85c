"""Monte Carlo synthesis of balanced-homodyne datasets and their file format.

Sampling uses a counter-based generator (splitmix-style bijection of a
per-phase key and a sample counter), so every phase bin is an independent
stream and the dataset is bitwise reproducible regardless of how the work
is scheduled across threads.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .states import StateSpec, _fock_table, quadrature_gaussian_params, _displacement_shift

TWO_PI = 2.0 * math.pi

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB

FORMAT_TAG = "pml-dataset v1"


class DatasetFormatError(ValueError):
    """Raised when a dataset file violates the on-disk format."""


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_2) & _MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_2)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> int:
    """Derive the counter-stream key for one phase bin."""
    return _mix64(_mix64((seed + (stream + 1) * _GOLDEN) & _MASK64))


def stream_uniforms(key: int, start: int, count: int) -> np.ndarray:
    """``count`` uniforms in (0, 1] at counters start..start+count-1."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = _mix64_array(np.uint64(key) + counters * np.uint64(_GOLDEN))
    return ((z >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def stream_normals(key: int, count: int) -> np.ndarray:
    """Standard normals via the Box-Muller transform of counter uniforms."""
    pairs = (count + 1) // 2
    u1 = stream_uniforms(key, 0, pairs)
    u2 = stream_uniforms(key, pairs, pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = TWO_PI * u2
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:count]


@dataclass(frozen=True)
class MeasurementPlan:
    """Phase grid, per-phase sample count, efficiency and RNG seed."""

    n_phases: int
    samples_per_phase: int
    eta: float
    seed: int

    def __post_init__(self):
        if self.n_phases < 1:
            raise ValueError(f"n_phases must be positive, got {self.n_phases}")
        if self.samples_per_phase < 1:
            raise ValueError(
                f"samples_per_phase must be positive, got {self.samples_per_phase}"
            )
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta out of range (0, 1]: {self.eta}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def theta_grid(self) -> np.ndarray:
        """Equidistant phases theta_j = 2 pi j / M on [0, 2pi)."""
        return TWO_PI * np.arange(self.n_phases) / self.n_phases

    @property
    def total_samples(self) -> int:
        return self.n_phases * self.samples_per_phase


@dataclass(frozen=True, eq=False)
class HomodyneDataset:
    """Simulated quadrature records grouped by phase bin."""

    plan: MeasurementPlan
    samples: np.ndarray
    state_label: str

    def __post_init__(self):
        expected = (self.plan.n_phases, self.plan.samples_per_phase)
        if self.samples.shape != expected:
            raise ValueError(
                f"sample array shape {self.samples.shape} does not match plan {expected}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("dataset contains non-finite samples")


def default_threads() -> int:
    env = os.environ.get("PML_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _simulate_phase(state: StateSpec, plan: MeasurementPlan, j: int) -> np.ndarray:
    theta = float(plan.theta_grid[j])
    key = stream_key(plan.seed, j)
    n = plan.samples_per_phase
    if state.kind in ("coherent", "squeezed_vacuum"):
        mean, std = quadrature_gaussian_params(state, theta, plan.eta)
        return mean + std * stream_normals(key, n)
    # Fock / displaced Fock: inverse-CDF lookup on the tabulated density
    table = _fock_table(state.n, plan.eta)
    u = stream_uniforms(key, 0, n)
    x = np.interp(u, table.inv_cdf_p, table.inv_cdf_x)
    if state.kind == "displaced_fock":
        x = x + _displacement_shift(state, theta, plan.eta)
    return x


def simulate(state: StateSpec, plan: MeasurementPlan, threads: int | None = None) -> HomodyneDataset:
    """Draw the full dataset; bitwise deterministic given (state, plan).

    Phase bins are independent counter streams, so they may be generated
    concurrently; the result does not depend on ``threads``.
    """
    workers = threads if threads is not None else default_threads()
    samples = np.empty((plan.n_phases, plan.samples_per_phase))
    if workers > 1 and plan.n_phases > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _simulate_phase(state, plan, j), range(plan.n_phases)))
        for j, row in enumerate(rows):
            samples[j] = row
    else:
        for j in range(plan.n_phases):
            samples[j] = _simulate_phase(state, plan, j)
    return HomodyneDataset(plan=plan, samples=samples, state_label=state.label())


def write_dataset(ds: HomodyneDataset, path, extra_comments: tuple[str, ...] = ()) -> None:
    """Serialize to the UTF-8 text format; round trips are bit-exact."""
    plan = ds.plan
    theta = plan.theta_grid
    lines = [
        f"# {FORMAT_TAG}",
        f"# state={ds.state_label}",
        f"# eta={plan.eta!r}",
        f"# phases={plan.n_phases}",
        f"# samples_per_phase={plan.samples_per_phase}",
        f"# seed={plan.seed}",
    ]
    lines.extend(f"# {c}" for c in extra_comments)
    lines.append("phase_index,theta,x")
    for j in range(plan.n_phases):
        theta_txt = f"{theta[j]:.17g}"
        prefix = f"{j},{theta_txt},"
        lines.extend(prefix + repr(float(x)) for x in ds.samples[j])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _header_value(line: str, key: str, line_no: int) -> str:
    prefix = f"# {key}="
    if not line.startswith(prefix):
        raise DatasetFormatError(f"line {line_no}: expected '{prefix}...', got {line!r}")
    return line[len(prefix):]


def read_dataset(path) -> HomodyneDataset:
    """Parse and validate a dataset file written by ``write_dataset``."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != f"# {FORMAT_TAG}":
        raise DatasetFormatError(f"line 1: not a {FORMAT_TAG} file")
    state_label = _header_value(lines[1], "state", 2)
    eta_txt = _header_value(lines[2], "eta", 3)
    try:
        eta = float(eta_txt)
    except ValueError:
        raise DatasetFormatError(f"line 3: eta is not a number: {eta_txt!r}") from None
    if not 0.0 < eta <= 1.0:
        raise DatasetFormatError(f"line 3: eta out of range (0, 1]: {eta}")
    try:
        n_phases = int(_header_value(lines[3], "phases", 4))
        samples_per_phase = int(_header_value(lines[4], "samples_per_phase", 5))
        seed = int(_header_value(lines[5], "seed", 6))
    except ValueError as exc:
        raise DatasetFormatError(f"malformed header: {exc}") from None
    plan = MeasurementPlan(
        n_phases=n_phases, samples_per_phase=samples_per_phase, eta=eta, seed=seed
    )
    body_start = 6
    while body_start < len(lines) and lines[body_start].startswith("#"):
        body_start += 1
    if body_start >= len(lines) or lines[body_start] != "phase_index,theta,x":
        raise DatasetFormatError(f"line {body_start + 1}: missing 'phase_index,theta,x' header")
    theta = plan.theta_grid
    samples = np.empty((n_phases, samples_per_phase))
    row = 0
    for offset, line in enumerate(lines[body_start + 1:]):
        line_no = body_start + 2 + offset
        parts = line.split(",")
        if len(parts) != 3:
            raise DatasetFormatError(f"line {line_no}: expected 3 columns, got {len(parts)}")
        try:
            j = int(parts[0])
            theta_val = float(parts[1])
            x = float(parts[2])
        except ValueError:
            raise DatasetFormatError(f"line {line_no}: malformed row {line!r}") from None
        if row >= plan.total_samples:
            raise DatasetFormatError(
                f"line {line_no}: dimension mismatch, more than {plan.total_samples} rows"
            )
        expect_j, expect_k = divmod(row, samples_per_phase)
        if j != expect_j:
            raise DatasetFormatError(
                f"line {line_no}: dimension mismatch, expected phase_index {expect_j}, got {j}"
            )
        if theta_val != theta[j]:
            raise DatasetFormatError(
                f"line {line_no}: theta {theta_val!r} does not match grid value {theta[j]!r}"
            )
        if not math.isfinite(x):
            raise DatasetFormatError(f"line {line_no}: non-finite sample {parts[2]!r}")
        samples[expect_j, expect_k] = x
        row += 1
    if row != plan.total_samples:
        raise DatasetFormatError(
            f"line {len(lines)}: dimension mismatch, expected {plan.total_samples} rows, got {row}"
        )
    return HomodyneDataset(plan=plan, samples=samples, state_label=state_label)
