import re
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"
CORPUS = FIXTURES / "corpus"
GRIDS = FIXTURES / "grids"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", nodeid)
            if not m or (outcome == "passed" and rep.when != "call"):
                continue
            n = int(m.group(1))
            status = "PASS" if outcome == "passed" else "FAIL"
            title = lines.get(n, (None, m.group(2).replace("_", " ")))[1]
            if lines.get(n, ("PASS",))[0] != "FAIL":
                lines[n] = (status, title)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(lines):
            status, title = lines[n]
            terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}")
