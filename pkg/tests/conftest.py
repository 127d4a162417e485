import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qhafinite.group import FiniteAbelianGroup

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_GROUPS = [(2,), (3,), (4,), (2, 2), (2, 3)]


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=SMALL_GROUPS, ids=lambda o: "x".join(f"Z{n}" for n in o))
def group(request):
    return FiniteAbelianGroup(request.param)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, with the measured value."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::test_criterion" not in getattr(rep, "nodeid", "") or rep.when != "call":
                continue
            name = rep.nodeid.split("::")[-1][len("test_criterion_"):]
            detail = dict(rep.user_properties).get("measured", "")
            lines.append((name, f"{'PASS' if outcome == 'passed' else 'FAIL'}  criterion {name}  {detail}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
