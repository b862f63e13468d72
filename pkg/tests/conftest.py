import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wandering import FatouEvaluator, ParabolicMap  # noqa: E402
from wandering.poly_core import quartic_b  # noqa: E402

C_STAR = -0.5859624819929846
B_STAR = quartic_b(C_STAR)
A_095 = (0.0, 1.0, 1.0, 0.95)


@pytest.fixture(scope="session")
def ev_quad():
    return FatouEvaluator(ParabolicMap.from_coeffs([0, 1, 1]))


@pytest.fixture(scope="session")
def ev_095():
    return FatouEvaluator(ParabolicMap.from_coeffs(A_095))


@pytest.fixture(scope="session")
def ev_real():
    return FatouEvaluator(ParabolicMap.real_quartic(-0.586))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
