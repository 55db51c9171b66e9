import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = []


@contextmanager
def _record(name, limit_s):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and elapsed >= limit_s:
            ok = False
            _CRITERIA.append((name, ok, elapsed, limit_s))
            raise AssertionError(f"{name}: took {elapsed:.1f}s, limit {limit_s}s")
        _CRITERIA.append((name, ok, elapsed, limit_s))


@pytest.fixture
def criterion():
    """``with criterion("AC1 ...", limit_s=10): ...`` records a pass/fail line."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, elapsed, limit in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({elapsed:.2f}s / limit {limit}s)")
