import json

import pytest
from hypothesis import settings

from oracles import FROZEN

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def report():
    def emit(number: int, ok: bool, detail: str, seconds: float):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{seconds:.1f}s]"
        ACCEPTANCE_LINES.append(line)
        print(line, flush=True)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
