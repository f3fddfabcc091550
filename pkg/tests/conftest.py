from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from spheroidal.lattice import build_joint_spectrum, l_star_for

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Store the one-line verdict of an acceptance criterion for the terminal summary."""

    def _record(number: int, passed: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])


@pytest.fixture(scope="session")
def spectrum16():
    """gamma = 16 joint spectrum large enough for the standard monodromy loop."""
    ls = l_star_for(16.0)
    return build_joint_spectrum(16.0, ls + 2, 2 * ls + 4)
