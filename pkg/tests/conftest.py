"""
Pytest configuration and shared fixtures.

This module provides fixtures that are available to all tests.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src directory to Python path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))


@pytest.fixture(autouse=True)
def isolated_activity_log(tmp_path, monkeypatch):
    """
    Redirect the activity log to a temporary file for every test.

    Computations and CLI commands log every run; this keeps the real
    src/data/activity.log untouched.

    Yields:
        Path: Path to the temporary log file
    """
    import activity_log

    log_file = tmp_path / "data" / "activity.log"
    monkeypatch.setattr(activity_log, "DATA_DIR", log_file.parent)
    monkeypatch.setattr(activity_log, "LOG_FILE", log_file)

    yield log_file


@pytest.fixture
def dimensionless_config():
    """
    Provide a factory for dimensionless clock configs (ħ = c = g = ΔE = 1).

    Returns:
        callable: factory(a, alpha, ell=0, psi=None, n_site=1) -> ClockConfig

    Example:
        def test_something(dimensionless_config):
            cfg = dimensionless_config(2.0, 0.3, ell=2)
    """
    from clock_model import ClockConfig

    def _make(a, alpha, ell=0, psi=None, n_site=1):
        return ClockConfig.dimensionless(a, alpha, psi=psi, ell=ell, n_site=n_site)

    return _make


@pytest.fixture
def cd_config():
    """
    Provide a physical cadmium clock with 101 layers.

    ΔE = 6.0e-19 J, h = 4.2e-7 m, g = 9.80665 m/s², τ = 1 s.

    Returns:
        ClockConfig: The configuration
    """
    from clock_model import ClockConfig

    return ClockConfig(delta_e=6.0e-19, tau=1.0, h_spacing=4.2e-7, ell=50)


@pytest.fixture
def rng():
    """
    Provide a seeded numpy Generator for random test inputs.

    Returns:
        numpy.random.Generator: PCG64 generator with seed 20240917
    """
    return np.random.default_rng(20240917)


@pytest.fixture
def random_configs(rng):
    """
    Provide random dimensionless multilayer configs.

    ell <= 10, A in (0, 20], Aα/2 in (0, π).

    Returns:
        callable: factory(count) -> list of ClockConfig
    """
    from clock_model import ClockConfig

    def _make(count):
        configs = []
        for _ in range(count):
            ell = int(rng.integers(0, 11))
            a = float(rng.uniform(1e-3, 20.0))
            x = float(rng.uniform(1e-3, math.pi - 1e-3))
            psi = float(rng.uniform(0.0, 2.0 * math.pi))
            configs.append(ClockConfig.dimensionless(a, 2.0 * x / a, psi=psi, ell=ell))
        return configs

    return _make
