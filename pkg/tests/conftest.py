from pathlib import Path

import numpy as np
import pytest

from spherekde.geometry import sphere_quadrature

DATA = Path(__file__).parent / "data"

_acceptance_lines: list[str] = []


def record_criterion(line: str) -> None:
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def quad():
    return sphere_quadrature(64, 128)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def data_dir():
    return DATA
