from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """Context manager that records a PASS/FAIL line for one acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE]

    @contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        status = "FAIL"
        notes: list = []
        try:
            yield notes
            status = "PASS"
        finally:
            extra = f" [{'; '.join(notes)}]" if notes else ""
            lines[number] = f"criterion {number:2d} {status}  {title} ({time.perf_counter() - start:.1f}s){extra}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
