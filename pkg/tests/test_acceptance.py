"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  The statistical criteria (4-6) use the frozen seed 7; margins at
that seed are recorded in comments.
"""

import math
import time

import numpy as np
import pytest

from pml import _core, estimator, homodyne, kernels, phasedist, states
from pml.kernels import OrderingBoundError

from conftest import PIPELINE_SEED, combined_stderr

ZETA = 1.317


@pytest.fixture(scope="module")
def pipeline():
    """Criterion-4 pipeline (simulate + spectrum), timed once."""
    state = states.StateSpec.squeezed_vacuum(ZETA, 0.0)
    plan = homodyne.MeasurementPlan(
        n_phases=120, samples_per_phase=5000, eta=0.8, seed=PIPELINE_SEED
    )
    start = time.perf_counter()
    ds = homodyne.simulate(state, plan)
    spectrum = estimator.estimate_spectrum(ds, 10, -1.0)
    elapsed = time.perf_counter() - start
    return {"state": state, "dataset": ds, "spectrum": spectrum, "seconds": elapsed}


def _report(number: int, elapsed: float, detail: str) -> None:
    print(f"acceptance criterion {number:2d}: PASS ({elapsed:6.2f} s) - {detail}")


def test_criterion_01_series_closed_form_equivalence():
    """Series kernels equal the closed forms: erf/4 and the erfi integral."""
    start = time.perf_counter()
    worst = 0.0
    for u in np.arange(0.0, 3.0 + 1e-9, 0.05):
        for l in (1, 2):
            delta = abs(kernels.kernel_series(l, float(u), 1e-14) - kernels.kernel_base(l, float(u)))
            worst = max(worst, delta)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 1.0
    _report(1, elapsed, f"series vs closed forms, max deviation = {worst:.2e}")


def test_criterion_02_integral_equation():
    """Angular integral of the kernel returns the filter function."""
    start = time.perf_counter()
    n = 2048
    theta = 2.0 * math.pi * np.arange(n) / n
    worst = 0.0
    for l in (1, 2, 3, 4):
        for r in (0.5, 1.0, 2.0):
            u = r * np.cos(theta)
            radial = (
                kernels.kernel_prefactor(l) * 0.25 * _core.erf(u)
                if l % 2
                else kernels.kernel_prefactor(l) * _core.k2(u)
            )
            integral = np.sum(radial * np.exp(1j * l * theta)) * (2.0 * math.pi / n)
            worst = max(worst, abs(integral - kernels.filter_F(l, r)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert elapsed < 1.0
    _report(2, elapsed, f"integral equation, max deviation = {worst:.2e}")


def test_criterion_03_wigner_limits():
    """Large-argument limits: sign kernel and logarithmic kernel."""
    start = time.perf_counter()
    worst_odd = max(
        abs(4.0 * kernels.kernel_base(1, u) - math.copysign(1.0, u))
        for u in (4.0, 5.0, 10.0, 25.0, -4.0, -7.0)
    )
    diffs = [kernels.kernel_base(2, u) - math.log(u) / math.pi for u in (20.0, 40.0, 80.0)]
    worst_even = max(abs(diffs[0] - diffs[1]), abs(diffs[1] - diffs[2]))
    elapsed = time.perf_counter() - start
    assert worst_odd <= 1e-6
    assert worst_even <= 1e-3
    assert elapsed < 1.0
    _report(3, elapsed, f"limits: odd {worst_odd:.2e}, even constant drift {worst_even:.2e}")


def test_criterion_04_moment_spectrum_reproduction(pipeline):
    """120 x 5000 samples at eta = 0.8: every moment within 3 sigma.

    Seed 7: max |z| over l = 1..10 is 1.45.
    """
    state, spectrum = pipeline["state"], pipeline["spectrum"]
    worst_z = 0.0
    for m in spectrum[1:]:
        exact = states.exact_phase_moment(state, m.l, -1.0)
        worst_z = max(worst_z, abs(m.value - exact) / combined_stderr(m))
    assert worst_z <= 3.0
    assert pipeline["seconds"] < 10.0
    _report(4, pipeline["seconds"], f"moment spectrum l=1..10, max |z| = {worst_z:.2f}")


def test_criterion_05_phase_distribution_reproduction(pipeline):
    """Reconstructed curve inside its own 3-sigma envelope at >= 95% of nodes.

    Seed 7: 97.1% of the 512 nodes; the misses cluster at the peaks where
    the L=10 truncation bias (~0.028) approaches the envelope.
    """
    start = time.perf_counter()
    curve = phasedist.reconstruct(pipeline["spectrum"], grid_size=512)
    exact = states.exact_phase_distribution(pipeline["state"], -1.0, curve.theta_grid)
    inside = np.abs(curve.values - exact) <= 3.0 * curve.pointwise_err
    elapsed = time.perf_counter() - start
    assert inside.mean() >= 0.95
    assert elapsed < 1.0
    _report(5, elapsed, f"phase distribution, {100 * inside.mean():.1f}% of nodes in envelope")


def test_criterion_06_moments_vs_ordering(pipeline):
    """Psi_2(s) across the ordering grid, and oracle monotonicity.

    Seed 7: max |z| over the four s values is 0.98.
    """
    start = time.perf_counter()
    s_values = (-0.5, -1.0, -2.0, -4.0)
    results = estimator.estimate_vs_s(pipeline["dataset"], 2, s_values)
    worst_z = 0.0
    oracle = []
    for m in results:
        exact = states.exact_phase_moment(pipeline["state"], 2, m.s)
        oracle.append(abs(exact))
        worst_z = max(worst_z, abs(m.value - exact) / combined_stderr(m))
    elapsed = time.perf_counter() - start
    assert worst_z <= 3.0
    assert all(a > b for a, b in zip(oracle, oracle[1:]))
    assert elapsed < 30.0
    _report(6, elapsed, f"Psi_2 vs s, max |z| = {worst_z:.2f}, oracle strictly decreasing")


def test_criterion_07_density_matrix_route():
    """c_{n,l} expansion over coherent matrices matches the filter oracle."""
    start = time.perf_counter()
    worst = 0.0
    for l in (1, 2, 3):
        for amp in (0.5, 1.0, 2.0):
            rho = states.coherent_density_matrix(amp, 40)
            for s in (-1.0, -2.0):
                got = estimator.moments_from_density(rho, l, s)
                want = states.exact_phase_moment(states.StateSpec.coherent(amp), l, s)
                worst = max(worst, abs(got - want))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert elapsed < 1.0
    _report(7, elapsed, f"density-matrix route, max deviation = {worst:.2e}")


def test_criterion_08_generating_function_extraction():
    """Ordered moments from the generating function of a coherent state."""
    start = time.perf_counter()
    coh = states.StateSpec.coherent(1.0)
    first = estimator.extract_ordered_moment(
        lambda s: states.exact_phase_moment(coh, 1, s), 0, 1, 0.0, t_ref=0.3
    )
    second = estimator.extract_ordered_moment(
        lambda s: states.exact_phase_moment(coh, 2, s), 0, 2, 0.0, t_ref=0.3
    )
    err1 = abs(first - math.sqrt(2.0))
    err2 = abs(second - 2.0)
    elapsed = time.perf_counter() - start
    assert err1 <= 1e-3
    assert err2 <= 1e-2
    assert elapsed < 1.0
    _report(8, elapsed, f"extraction errors {err1:.2e} (sqrt2), {err2:.2e} (2)")


def test_criterion_09_normalization_and_symmetry(pipeline, tmp_path):
    """Trace normalization, conjugation symmetry, curve integral, file identity."""
    start = time.perf_counter()
    ds = pipeline["dataset"]
    # Psi_0 = 1 exactly, zero error
    m0 = estimator.estimate_moment(ds, 0, -1.0)
    assert m0.value == 1.0 + 0j and m0.stderr_re == 0.0 and m0.stderr_im == 0.0
    # conjugation is exact, not approximate
    for l in (1, 2, 3, 7):
        plus = estimator.estimate_moment(ds, l, -1.0)
        minus = estimator.estimate_moment(ds, -l, -1.0)
        assert minus.value == plus.value.conjugate()
    # curve integral: the l=0 term carries the whole normalization, so the
    # integral is 1 to double-precision roundoff
    curve = phasedist.reconstruct(pipeline["spectrum"], grid_size=512)
    assert abs(curve.integral() - 1.0) <= 1e-12
    # dataset round trip is bit-exact
    path = tmp_path / "roundtrip.csv"
    homodyne.write_dataset(ds, path)
    back = homodyne.read_dataset(path)
    assert back.plan == ds.plan
    np.testing.assert_array_equal(back.samples, ds.samples)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _report(9, elapsed, "Psi_0 = 1, exact conjugation, unit curve integral, bit-exact file")


def test_criterion_10_loss_bound_enforcement(pipeline):
    """Requests at or above -(1-eta)/eta fail naming the bound."""
    start = time.perf_counter()
    ds = pipeline["dataset"]
    for s in (-0.25, -0.2, 0.0):
        with pytest.raises(OrderingBoundError, match="-0.25") as err:
            estimator.estimate_moment(ds, 2, s)
        assert "bound" in str(err.value)
    elapsed = time.perf_counter() - start
    _report(10, elapsed, "ordering bound rejected with diagnostic naming -0.25")
