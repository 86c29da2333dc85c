import numpy as np
import pytest

from pml import estimator, homodyne, states

# frozen seed for the figure-reproduction pipeline; statistical acceptance
# margins for this seed are recorded in the test comments
PIPELINE_SEED = 7

SQUEEZING = 1.317


@pytest.fixture(scope="session")
def sv_state():
    return states.StateSpec.squeezed_vacuum(SQUEEZING, 0.0)


@pytest.fixture(scope="session")
def sv_dataset(sv_state):
    """The paper-protocol dataset: 120 phases x 5000 samples at eta = 0.8."""
    plan = homodyne.MeasurementPlan(
        n_phases=120, samples_per_phase=5000, eta=0.8, seed=PIPELINE_SEED
    )
    return homodyne.simulate(sv_state, plan)


@pytest.fixture(scope="session")
def sv_spectrum(sv_dataset):
    """Moments l = 0..10 of the session dataset at s = -1."""
    return estimator.estimate_spectrum(sv_dataset, 10, -1.0)


def combined_stderr(m) -> float:
    return float(np.hypot(m.stderr_re, m.stderr_im))
