import os

import pytest
from hypothesis import HealthCheck, settings

from paraf import catalog

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

VALID = ("para_c_product", "para_sasakian_r3", "weak_almost_para_s3", "nonnormal_apc3")


@pytest.fixture(scope="session")
def bundles():
    """Every catalog entry at 12 samples."""
    return {k: catalog.make(k).with_sampling(12) for k in VALID}


# Acceptance lines, echoed in the terminal summary so they survive output capture.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
