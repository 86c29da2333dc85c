import math

import numpy as np
import pytest

from pml.estimator import MomentEstimate
from pml.phasedist import PhaseCurve, curve_error_stats, reconstruct
from pml.states import StateSpec, exact_phase_distribution, exact_phase_moment

TWO_PI = 2.0 * math.pi

ZETA = 1.317
# tail of the geometric moment sequence past L=10: (1/pi) q^6/(1-q),
# attained at theta = 0; q = Psi_2(-1) = 0.5773643
TRUNCATION_L10_MAX_DEV = 0.027898671779556447


def exact_moments(state, s, l_max, stderr=0.0):
    out = []
    for l in range(l_max + 1):
        v = exact_phase_moment(state, l, s)
        err = 0.0 if l == 0 else stderr
        out.append(
            MomentEstimate(l=l, s=s, value=v, stderr_re=err, stderr_im=err, n_samples=1)
        )
    return out


class TestReconstruct:
    def test_vacuum_uniform(self):
        moments = exact_moments(StateSpec.squeezed_vacuum(0.0), -1.0, 6)
        curve = reconstruct(moments, grid_size=128)
        np.testing.assert_allclose(curve.values, 1.0 / TWO_PI, atol=1e-15)
        assert curve.integral() == pytest.approx(1.0, abs=1e-12)

    def test_truncation_error_against_exact(self):
        # oracle moments at L=10: the max deviation equals the analytic
        # geometric tail, concentrated at the distribution peaks
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        curve = reconstruct(exact_moments(sv, -1.0, 10), grid_size=512)
        stats = curve_error_stats(curve, lambda t: exact_phase_distribution(sv, -1.0, t))
        assert stats["max_abs"] == pytest.approx(TRUNCATION_L10_MAX_DEV, rel=1e-6)
        q = exact_phase_moment(sv, 2, -1.0).real
        tail_bound = q**6 / (1.0 - q) / math.pi
        assert stats["max_abs"] <= tail_bound * (1.0 + 1e-9)

    def test_normalization_structural(self):
        # the l = 0 term carries all normalization, regardless of the
        # other moments
        moments = exact_moments(StateSpec.squeezed_vacuum(ZETA), -1.0, 10)
        for grid in (64, 512, 1000):
            curve = reconstruct(moments, grid_size=grid)
            assert curve.integral() == pytest.approx(1.0, abs=1e-12)

    def test_grid_refinement_agrees_at_shared_nodes(self):
        moments = exact_moments(StateSpec.squeezed_vacuum(ZETA, 0.9), -1.0, 8)
        c256 = reconstruct(moments, grid_size=256)
        c512 = reconstruct(moments, grid_size=512)
        np.testing.assert_allclose(c512.values[::2], c256.values, atol=1e-14)

    def test_rms_monotone_in_truncation(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        exact = lambda t: exact_phase_distribution(sv, -1.0, t)
        rms = [
            curve_error_stats(reconstruct(exact_moments(sv, -1.0, L), 512), exact)["rms"]
            for L in (4, 8, 12)
        ]
        assert rms[2] <= rms[1] <= rms[0]

    def test_sampled_moments_inside_envelope(self, sv_spectrum, sv_state):
        # >= 95% of nodes within the curve's own 3-sigma envelope
        curve = reconstruct(sv_spectrum, grid_size=512)
        exact = exact_phase_distribution(sv_state, -1.0, curve.theta_grid)
        inside = np.abs(curve.values - exact) <= 3.0 * curve.pointwise_err
        assert inside.mean() >= 0.95

    def test_pointwise_error_formula(self):
        moments = [
            MomentEstimate(l=0, s=-1.0, value=1.0, stderr_re=0.0, stderr_im=0.0, n_samples=1),
            MomentEstimate(l=1, s=-1.0, value=0.1, stderr_re=0.02, stderr_im=0.03, n_samples=1),
        ]
        curve = reconstruct(moments, grid_size=8)
        t = curve.theta_grid
        want = np.sqrt((0.02 * np.cos(t)) ** 2 + (0.03 * np.sin(t)) ** 2) / math.pi
        np.testing.assert_allclose(curve.pointwise_err, want, atol=1e-15)

    def test_sigma_window_damps_ripple(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        moments = exact_moments(sv, -1.0, 10)
        raw = reconstruct(moments, 512)
        windowed = reconstruct(moments, 512, sigma_window=True)
        # the window suppresses the high-l content, flattening oscillations
        assert windowed.values.std() < raw.values.std()
        assert windowed.integral() == pytest.approx(1.0, abs=1e-12)

    def test_missing_l_rejected(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        moments = exact_moments(sv, -1.0, 5)
        del moments[3]
        with pytest.raises(ValueError, match="missing"):
            reconstruct(moments)

    def test_mixed_s_rejected(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        moments = exact_moments(sv, -1.0, 3)
        moments[2] = MomentEstimate(
            l=2, s=-2.0, value=0.4, stderr_re=0.0, stderr_im=0.0, n_samples=1
        )
        with pytest.raises(ValueError, match="mix"):
            reconstruct(moments)

    def test_negative_l_rejected(self):
        moments = [
            MomentEstimate(l=0, s=-1.0, value=1.0, stderr_re=0.0, stderr_im=0.0, n_samples=1),
            MomentEstimate(l=-1, s=-1.0, value=0.1, stderr_re=0.0, stderr_im=0.0, n_samples=1),
        ]
        with pytest.raises(ValueError, match="l >= 0"):
            reconstruct(moments)


class TestCurveErrorStats:
    def test_identical_curves(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        curve = reconstruct(exact_moments(sv, -1.0, 10), 256)
        interp = lambda t: np.interp(t, curve.theta_grid, curve.values)
        stats = curve_error_stats(curve, interp)
        assert stats == {"max_abs": 0.0, "rms": 0.0}

    def test_constant_offset(self):
        sv = StateSpec.squeezed_vacuum(ZETA, 0.0)
        curve = reconstruct(exact_moments(sv, -1.0, 6), 128)
        delta = 0.017
        shifted = lambda t: np.interp(t, curve.theta_grid, curve.values) + delta
        stats = curve_error_stats(curve, shifted)
        assert stats["max_abs"] == pytest.approx(delta, rel=1e-12)
        assert stats["rms"] == pytest.approx(delta, rel=1e-12)


class TestPhaseCurveType:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            PhaseCurve(
                s=-1.0,
                theta_grid=np.zeros(4),
                values=np.zeros(5),
                truncation_order=1,
                pointwise_err=np.zeros(4),
            )
