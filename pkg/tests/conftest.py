import math

import numpy as np
import pytest

from polarize.vectors import load


@pytest.fixture
def pair60():
    return load([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])


@pytest.fixture
def duplicated_pair():
    return load([[1.0, 0.0], [1.0, 0.0]])


@pytest.fixture
def basis():
    return lambda n: load(np.eye(n))


ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
