import json
from pathlib import Path

import pytest

from graphlets import _backend
from graphlets.graph import from_spec

FROZEN = json.loads(Path(__file__).with_name("frozen.json").read_text())

BACKENDS = ["python"] + (["compiled"] if _backend.compiled is not None else [])


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def graph_of(spec):
    return from_spec(spec)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
