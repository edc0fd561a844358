import random
from fractions import Fraction

import pytest

# Criterion lines recorded by test_acceptance.py, printed after the run.
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split()[0])):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])


def random_fraction(rng: random.Random, span: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


@pytest.fixture
def rng():
    return random.Random(20240611)
