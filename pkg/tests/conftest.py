"""
Pytest Configuration and Fixtures for the Sum-Capacity Toolkit
Contains shared channel fixtures, marker registration, and test hooks
"""

import numpy as np
import pytest

from sumcap.channel import ChannelParams, db_to_linear, make_symmetric
from sumcap.regime import GenieSpec


# --- Configuration ---
# Seed for every generator handed to tests
TEST_SEED = 20080201

# Power of the reference sweep, in dB
REFERENCE_POWER_DB = 10.0


# --- Fixtures ---

@pytest.fixture(scope="session")
def reference_power():
    """Linear power of the 10 dB sweep."""
    return db_to_linear(REFERENCE_POWER_DB)


@pytest.fixture
def in_regime_params():
    """Symmetric channel P=10, h=0.25 (condition value 0.40625)."""
    return make_symmetric(10.0, 0.25)


@pytest.fixture
def above_threshold_params():
    """Symmetric channel P=10, h=0.5 (condition value 1.75)."""
    return make_symmetric(10.0, 0.5)


@pytest.fixture
def asym_params():
    """Asymmetric channel P1=P2=10, h12=0.2, h21=0.1 (condition value 0.36)."""
    return ChannelParams(10.0, 10.0, 0.2, 0.1)


@pytest.fixture
def onebit_genie():
    """Boundary genie eta = 1/h, rho = 0 for h = 0.5."""
    return GenieSpec.symmetric(2.0, 0.0)


@pytest.fixture
def rng():
    """
    Fresh seeded generator per test.

    Yields:
        numpy Generator
    """
    return np.random.default_rng(TEST_SEED)


# --- Hooks ---

@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """
    Attach the channel parameters a failing test ran with to its report,
    so the instance can be reproduced from the console or HTML report.
    """
    outcome = yield
    report = outcome.get_result()

    if report.when == "call" and report.failed:
        funcargs = getattr(item, "funcargs", {})
        channels = [f"{name} = {value!r}" for name, value in funcargs.items()
                    if isinstance(value, (ChannelParams, GenieSpec))]
        if channels:
            report.sections.append(("channel parameters", "\n".join(channels)))


def pytest_configure(config):
    """
    Pytest configuration hook.
    Sets up custom markers and reporting.
    """
    config.addinivalue_line("markers", "smoke: mark test as smoke test")
    config.addinivalue_line("markers", "regression: mark test as regression test")
    config.addinivalue_line("markers", "slow: Monte Carlo at full sample size or long fuzz loops")
    config.addinivalue_line("markers", "channel: mark test as channel model related")
    config.addinivalue_line("markers", "bounds: mark test as bound evaluation related")
    config.addinivalue_line("markers", "regime: mark test as regime / genie construction related")
    config.addinivalue_line("markers", "gaussmi: mark test as Gaussian mutual information related")
    config.addinivalue_line("markers", "geometry: mark test as polar geometry / tangent related")
    config.addinivalue_line("markers", "montecarlo: mark test as sampling oracle related")
    config.addinivalue_line("markers", "verify: mark test as verification suite related")
    config.addinivalue_line("markers", "cli: mark test as command-line related")


def pytest_html_report_title(report):
    """Custom title for HTML report."""
    report.title = "Sum-Capacity Toolkit Test Report"
