"""Parity between the compiled core and the numpy fallback.

The two backends run the same algorithms with the same constants; they may
differ by a few ulp because numpy's vectorized transcendentals and libm
are not bit-identical, so agreement is asserted at 1e-13.
"""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from pml import _core
from pml._core import _pure

try:
    from pml._core import _speedups
except ImportError:
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None, reason="compiled core not built")


def _grid():
    rng = np.random.default_rng(42)
    return np.concatenate(
        [
            rng.uniform(-0.3, 0.3, 200),
            rng.uniform(-4.5, 4.5, 400),
            rng.uniform(-9.0, 9.0, 200),
            rng.uniform(-60.0, 60.0, 100),
            [0.0, 2.0, -2.0, 4.0, 6.5, 8.0],
        ]
    )


@needs_ext
@pytest.mark.parametrize("name", ["erf", "dawson", "k2"])
def test_elementwise_parity(name):
    x = np.ascontiguousarray(_grid())
    a = getattr(_pure, name)(x)
    b = getattr(_speedups, name)(x)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)


def test_backend_reports_name():
    assert _core.backend() in ("python", "cython")


def test_pure_backend_forced_in_subprocess():
    env = dict(os.environ, PML_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "import pml; print(pml.backend())"],
        capture_output=True, text=True, env=env,
    )
    assert out.stdout.strip() == "python"


@needs_ext
def test_cython_backend_forced_in_subprocess():
    env = dict(os.environ, PML_BACKEND="cython")
    out = subprocess.run(
        [sys.executable, "-c", "import pml; print(pml.backend())"],
        capture_output=True, text=True, env=env,
    )
    assert out.stdout.strip() == "cython"


def test_invalid_backend_rejected():
    env = dict(os.environ, PML_BACKEND="fortran")
    out = subprocess.run(
        [sys.executable, "-c", "import pml"], capture_output=True, text=True, env=env
    )
    assert out.returncode != 0
    assert "PML_BACKEND" in out.stderr


@needs_ext
def test_end_to_end_estimates_agree(tmp_path):
    """Full pipeline under each backend: same dataset bytes, moments to 1e-12."""
    data = tmp_path / "d.csv"
    script = [
        sys.executable, "-m", "pml.cli", "simulate", "--state", "sv",
        "--zeta", "1.0", "--psi", "0.3", "--eta", "0.85",
        "--phases", "24", "--samples", "2000", "--seed", "17", "-o", str(data),
    ]
    subprocess.run(script, check=True, capture_output=True)
    results = {}
    for backend in ("python", "cython"):
        out = tmp_path / f"m_{backend}.json"
        env = dict(os.environ, PML_BACKEND=backend)
        subprocess.run(
            [sys.executable, "-m", "pml.cli", "estimate", "-i", str(data),
             "--l", "0:6", "--s", "-1", "-o", str(out)],
            check=True, capture_output=True, env=env,
        )
        results[backend] = json.loads(out.read_text())["moments"]
    for a, b in zip(results["python"], results["cython"]):
        assert a["l"] == b["l"]
        assert a["re"] == pytest.approx(b["re"], abs=1e-12)
        assert a["im"] == pytest.approx(b["im"], abs=1e-12)
        assert a["stderr_re"] == pytest.approx(b["stderr_re"], abs=1e-12)
