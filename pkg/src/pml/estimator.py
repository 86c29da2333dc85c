"""Direct sampling of exponential phase moments from homodyne datasets.

The estimate for moment l at ordering s is the empirical average of the
loss-compensated sampling kernel over all recorded (x, theta) pairs, with
per-component statistical errors from the empirical spread of the
per-sample kernel values.  Also hosts the density-matrix expansion
coefficients and the generating-function extraction of ordered moments.
"""

import json
import math
import threading
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _core
from .homodyne import HomodyneDataset, default_threads
from .kernels import (
    OrderingBoundError,
    OrderingContext,
    filter_series_coefficient,
    kernel_prefactor,
)

TWO_PI = 2.0 * math.pi

MOMENTS_SCHEMA_VERSION = 1

# log-space evaluation keeps (n + l)! representable up to this order
CNL_MAX_ORDER = 170

# generating-function fit: sample points t/t_ref, condition and residual
# guards; at the default t_ref the fit residual of a well-behaved moment
# function sits near 1e-7, two decades inside the guard
EXTRACTION_T_FRACTIONS = np.arange(1, 11) * 0.05
EXTRACTION_DEFAULT_T_REF = 0.3
EXTRACTION_MAX_COND = 1e12
EXTRACTION_MAX_RESIDUAL = 1e-4


@dataclass(frozen=True)
class MomentEstimate:
    """Sampled Psi_l(s) with per-component standard errors."""

    l: int
    s: float
    value: complex
    stderr_re: float
    stderr_im: float
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be positive, got {self.n_samples}")
        if not (math.isfinite(self.stderr_re) and math.isfinite(self.stderr_im)):
            raise ValueError("standard errors must be finite")
        if self.stderr_re < 0 or self.stderr_im < 0:
            raise ValueError("standard errors must be nonnegative")
        if self.l == 0 and (self.value != 1.0 or self.stderr_re != 0.0 or self.stderr_im != 0.0):
            raise ValueError("the l = 0 moment is identically 1 with zero error")


def pairwise_sum(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Deterministic pairwise reduction over a fixed power-of-two partition.

    The array is zero-padded to the next power of two and halves are folded
    repeatedly; the summation tree is therefore independent of any chunking
    or thread count.
    """
    arr = np.asarray(values, dtype=np.float64)
    arr = np.moveaxis(arr, axis, -1)
    n = arr.shape[-1]
    size = 1 << max(0, (n - 1).bit_length())
    if size != n:
        pad = np.zeros(arr.shape[:-1] + (size - n,), dtype=np.float64)
        arr = np.concatenate([arr, pad], axis=-1)
    while arr.shape[-1] > 1:
        half = arr.shape[-1] // 2
        arr = arr[..., :half] + arr[..., half:]
    return arr[..., 0]


@dataclass(frozen=True)
class _RadialSums:
    """Per-phase pairwise sums of the radial kernel values and their squares."""

    k1: np.ndarray | None
    k1_sq: np.ndarray | None
    k2: np.ndarray | None
    k2_sq: np.ndarray | None


def _radial_sums(
    ds: HomodyneDataset,
    ctx: OrderingContext,
    threads: int | None,
    odd: bool = True,
    even: bool = True,
) -> _RadialSums:
    workers = threads if threads is not None else default_threads()
    inv_scale = 1.0 / ctx.scale

    def one_phase(j: int) -> tuple[float, ...]:
        u = ds.samples[j] * inv_scale
        out = []
        if odd:
            k1 = 0.25 * _core.erf(u)
            out += [float(pairwise_sum(k1)), float(pairwise_sum(k1 * k1))]
        if even:
            k2 = _core.k2(u)
            out += [float(pairwise_sum(k2)), float(pairwise_sum(k2 * k2))]
        return tuple(out)

    m = ds.plan.n_phases
    if workers > 1 and m > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one_phase, range(m)))
    else:
        rows = [one_phase(j) for j in range(m)]
    arr = np.array(rows)
    col = 0
    k1 = k1_sq = k2 = k2_sq = None
    if odd:
        k1, k1_sq = arr[:, col], arr[:, col + 1]
        col += 2
    if even:
        k2, k2_sq = arr[:, col], arr[:, col + 1]
    return _RadialSums(k1=k1, k1_sq=k1_sq, k2=k2, k2_sq=k2_sq)


# datasets are immutable, so the per-(dataset, s) kernel sums are memoized:
# conjugate moments and repeated single-l estimates reuse one radial pass
_SUMS_CACHE: "weakref.WeakKeyDictionary[HomodyneDataset, dict]" = weakref.WeakKeyDictionary()
_SUMS_LOCK = threading.Lock()
_SUMS_CACHE_MAX_S = 64


def _cached_sums(
    ds: HomodyneDataset,
    ctx: OrderingContext,
    threads: int | None,
    odd: bool,
    even: bool,
) -> _RadialSums:
    with _SUMS_LOCK:
        per_ds = _SUMS_CACHE.setdefault(ds, {})
        entry = per_ds.get(ctx.s)
        if entry is None:
            if len(per_ds) >= _SUMS_CACHE_MAX_S:
                per_ds.clear()
            entry = per_ds.setdefault(ctx.s, {})
        need_odd = odd and "k1" not in entry
        need_even = even and "k2" not in entry
    if need_odd or need_even:
        fresh = _radial_sums(ds, ctx, threads, odd=need_odd, even=need_even)
        with _SUMS_LOCK:
            if need_odd:
                entry.setdefault("k1", fresh.k1)
                entry.setdefault("k1_sq", fresh.k1_sq)
            if need_even:
                entry.setdefault("k2", fresh.k2)
                entry.setdefault("k2_sq", fresh.k2_sq)
    with _SUMS_LOCK:
        return _RadialSums(
            k1=entry.get("k1"),
            k1_sq=entry.get("k1_sq"),
            k2=entry.get("k2"),
            k2_sq=entry.get("k2_sq"),
        )


def _assemble(ds: HomodyneDataset, sums: _RadialSums, l: int, s: float) -> MomentEstimate:
    plan = ds.plan
    total = plan.total_samples
    al = abs(l)
    pref = kernel_prefactor(al)
    if al % 2 == 1:
        s_j, q_j = sums.k1, sums.k1_sq
    else:
        s_j, q_j = sums.k2, sums.k2_sq
    theta = plan.theta_grid
    cos_l = np.cos(al * theta)
    sin_l = np.sin(al * theta)

    sum_re = pref * pairwise_sum(cos_l * s_j)
    sum_im = pref * pairwise_sum(sin_l * s_j)
    sum_re_sq = pref * pref * pairwise_sum(cos_l * cos_l * q_j)
    sum_im_sq = pref * pref * pairwise_sum(sin_l * sin_l * q_j)

    mean_re = sum_re / total
    mean_im = sum_im / total
    # empirical std dev of the per-sample kernel values, per component
    var_re = max(0.0, (sum_re_sq - total * mean_re**2) / (total - 1)) if total > 1 else 0.0
    var_im = max(0.0, (sum_im_sq - total * mean_im**2) / (total - 1)) if total > 1 else 0.0
    stderr_re = TWO_PI * math.sqrt(var_re / total)
    stderr_im = TWO_PI * math.sqrt(var_im / total)

    value = complex(TWO_PI * mean_re, TWO_PI * mean_im)
    if l < 0:
        value = value.conjugate()
    return MomentEstimate(
        l=l, s=s, value=value, stderr_re=stderr_re, stderr_im=stderr_im, n_samples=total
    )


def _context_for(ds: HomodyneDataset, s: float) -> OrderingContext:
    try:
        return OrderingContext(s=s, eta=ds.plan.eta)
    except OrderingBoundError:
        raise
    except ValueError as exc:  # pragma: no cover - plan eta is pre-validated
        raise OrderingBoundError(str(exc)) from None


def estimate_moment(
    ds: HomodyneDataset, l: int, s: float, threads: int | None = None
) -> MomentEstimate:
    """Sampled exponential phase moment Psi_l(s) of one dataset.

    Requires s < -(1 - eta)/eta strictly; l = 0 short-circuits to 1.
    The negative-l estimate is exactly the conjugate of the positive one.
    """
    if l == 0:
        return MomentEstimate(
            l=0, s=s, value=1.0 + 0j, stderr_re=0.0, stderr_im=0.0,
            n_samples=ds.plan.total_samples,
        )
    ctx = _context_for(ds, s)
    is_odd = abs(l) % 2 == 1
    sums = _cached_sums(ds, ctx, threads, odd=is_odd, even=not is_odd)
    return _assemble(ds, sums, l, s)


def estimate_spectrum(
    ds: HomodyneDataset, l_max: int, s: float, threads: int | None = None
) -> list[MomentEstimate]:
    """Moments l = 0..l_max sharing one pass over the samples.

    The per-sample kernel argument and both radial kernel values are
    computed once and reused for every l.
    """
    if l_max < 1:
        raise ValueError(f"l_max must be positive, got {l_max}")
    ctx = _context_for(ds, s)
    sums = _cached_sums(ds, ctx, threads, odd=True, even=True)
    out = [
        MomentEstimate(
            l=0, s=s, value=1.0 + 0j, stderr_re=0.0, stderr_im=0.0,
            n_samples=ds.plan.total_samples,
        )
    ]
    out.extend(_assemble(ds, sums, l, s) for l in range(1, l_max + 1))
    return out


def estimate_vs_s(
    ds: HomodyneDataset, l: int, s_values, threads: int | None = None
) -> list[MomentEstimate]:
    """One estimate of Psi_l per requested ordering parameter."""
    values = [float(s) for s in s_values]
    for s in values:
        _context_for(ds, s)  # validate the whole grid before any work
    return [estimate_moment(ds, l, s, threads=threads) for s in values]


def cnl_coefficient(n: int, l: int, s: float) -> float:
    """Expansion coefficient c_{n,l}(s) of Psi_l over rho_{n+l,n}.

    Evaluated in log space with sign tracking so that factorials up to
    n + l = 170 stay in range.
    """
    if n < 0 or l < 1:
        raise ValueError(f"cnl_coefficient requires n >= 0 and l >= 1, got n={n}, l={l}")
    if s >= 1:
        raise ValueError(f"cnl_coefficient requires s < 1, got {s}")
    if n + l > CNL_MAX_ORDER:
        raise ValueError(f"n + l must not exceed {CNL_MAX_ORDER}, got {n + l}")
    log_pref = (n + 0.5 * l) * math.log(2.0 / (1.0 - s)) + 0.5 * (
        math.lgamma(n + 1) + math.lgamma(n + l + 1)
    )
    z = -0.5 * (1.0 + s)
    log_terms = []
    signs = []
    for k in range(n + 1):
        if k > 0 and z == 0.0:
            break  # s = -1: every k >= 1 term carries 0^k
        log_t = (
            math.lgamma(n - k + 0.5 * l + 1)
            - math.lgamma(k + 1)
            - math.lgamma(n - k + 1)
            - math.lgamma(n + l - k + 1)
        )
        if k > 0:
            log_t += k * math.log(abs(z))
        log_terms.append(log_t)
        signs.append(1.0 if (z >= 0.0 or k % 2 == 0) else -1.0)
    peak = max(log_terms)
    total = sum(sg * math.exp(lt - peak) for sg, lt in zip(signs, log_terms))
    return math.exp(log_pref + peak) * total


def moments_from_density(rho: np.ndarray, l: int, s: float) -> complex:
    """Psi_l(s) as the c_{n,l}-weighted sum of off-diagonal matrix elements."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"rho must be a square matrix, got shape {rho.shape}")
    cutoff = rho.shape[0] - 1
    if l < 1:
        raise ValueError(f"moments_from_density requires l >= 1, got {l}")
    if cutoff < l:
        raise ValueError(f"matrix cutoff {cutoff} is below l = {l}")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise ValueError("rho must be Hermitian")
    trace = float(np.real(np.trace(rho)))
    if abs(trace - 1.0) > 1e-6:
        raise ValueError(f"rho trace {trace} is not close to 1")
    acc = 0j
    for n in range(cutoff - l + 1):
        acc += cnl_coefficient(n, l, s) * complex(rho[n + l, n])
    return acc


def extract_ordered_moment(
    psi_fn, n: int, l: int, s0: float, t_ref: float = EXTRACTION_DEFAULT_T_REF
) -> complex:
    """s0-ordered moment <r^(2n+|l|) e^(i l theta)> from Psi_l as generating function.

    Samples t -> Psi_l(s0 - 1/t^2) at t = (0.05..0.5) t_ref, fits the
    matching-parity polynomial of degree 2n+|l|+4, and reads off the
    t^(2n+|l|) coefficient divided by the filter Taylor coefficient f_{n,l}.
    """
    if n < 0 or l == 0:
        raise ValueError(f"extraction requires n >= 0 and l != 0, got n={n}, l={l}")
    al = abs(l)
    m = 2 * n + al
    exponents = np.arange(al, m + 5, 2)
    t_values = EXTRACTION_T_FRACTIONS * t_ref
    if exponents.size > t_values.size:
        raise ValueError(
            f"derivative order too high: {exponents.size} basis terms exceed "
            f"{t_values.size} sample points"
        )
    samples = np.array([complex(psi_fn(s0 - 1.0 / t**2)) for t in t_values])
    tau = t_values / t_values[-1]
    design = tau[:, None] ** exponents[None, :]
    cond = np.linalg.cond(design)
    if cond > EXTRACTION_MAX_COND:
        raise ValueError(
            f"ill-conditioned extraction fit (condition number {cond:.3g}); "
            f"use a smaller t_ref"
        )
    coeffs = np.linalg.lstsq(design, samples, rcond=None)[0]
    fitted = design @ coeffs
    scale = max(1e-30, float(np.max(np.abs(samples))))
    misfit = float(np.max(np.abs(fitted - samples))) / scale
    if misfit > EXTRACTION_MAX_RESIDUAL:
        raise ValueError(
            f"extraction fit residual {misfit:.3g} exceeds {EXTRACTION_MAX_RESIDUAL:.0e} "
            f"(generating function not in its asymptotic regime); use a smaller t_ref"
        )
    slot = int(np.nonzero(exponents == m)[0][0])
    coeff_t = complex(coeffs[slot]) / t_values[-1] ** m
    return coeff_t / filter_series_coefficient(n, al)


def moments_to_json(moments: list[MomentEstimate], meta: dict | None = None) -> str:
    """Serialize moment estimates to the versioned JSON document."""
    doc = {
        "pml_moments": MOMENTS_SCHEMA_VERSION,
        "moments": [
            {
                "l": m.l,
                "s": m.s,
                "re": m.value.real,
                "im": m.value.imag,
                "stderr_re": m.stderr_re,
                "stderr_im": m.stderr_im,
                "n_samples": m.n_samples,
            }
            for m in moments
        ],
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=2)


def moments_from_json(text: str) -> list[MomentEstimate]:
    """Parse and validate the JSON moment document."""
    doc = json.loads(text)
    if doc.get("pml_moments") != MOMENTS_SCHEMA_VERSION:
        raise ValueError(
            f"unsupported moments schema: pml_moments={doc.get('pml_moments')!r}"
        )
    out = []
    for rec in doc["moments"]:
        out.append(
            MomentEstimate(
                l=int(rec["l"]),
                s=float(rec["s"]),
                value=complex(float(rec["re"]), float(rec["im"])),
                stderr_re=float(rec["stderr_re"]),
                stderr_im=float(rec["stderr_im"]),
                n_samples=int(rec["n_samples"]),
            )
        )
    return out
