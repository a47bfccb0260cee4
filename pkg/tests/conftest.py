import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def hyp2f1_oracle():
    """25 (a, b, c, z) tuples with 60-digit values; see tests/oracles/hyp2f1_oracle.py."""
    return json.loads((DATA / "hyp2f1_oracle.json").read_text())


_CRITERIA_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record the one-line verdict of an acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_CRITERIA_KEY, [])

    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
