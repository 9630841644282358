import json
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent / "data"
sys.path.insert(0, str(Path(__file__).resolve().parent))

_ACCEPTANCE: list[str] = []


def record_acceptance(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
    _ACCEPTANCE.append(line)
    print(line)


@pytest.fixture
def acceptance():
    return record_acceptance


@pytest.fixture(scope="session")
def bessel_sample():
    return json.loads((DATA / "bessel_sample.json").read_text())["points"]


@pytest.fixture(scope="session")
def density_fixtures():
    return json.loads((DATA / "density_contour.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
