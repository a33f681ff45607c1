import math

import pytest

from sl_iosp.core import ProblemSpec

PI2 = math.pi**2
REGIMES = ("Above", "Interior", "AtPrior", "Below", "Resonant")


def regime_spec(regime: str, m: int, p: float, q0: float = 1.5) -> ProblemSpec:
    """A representative spec for each regime, scaled with m**2."""
    gap = {
        "Above": 1.5 * m * m * PI2,
        "Interior": 0.5 * m * m * PI2,
        "AtPrior": 0.0,
        "Below": -5.0 * m * m,
        "Resonant": m * m * PI2,
    }[regime]
    spec = ProblemSpec(q0, q0 + gap, m, p)
    if regime == "Resonant" and spec.gap != m * m * PI2:
        spec = ProblemSpec(0.0, m * m * PI2, m, p)
    return spec


# Lines collected by test_acceptance and echoed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def pi2():
    return PI2
