import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(pytestconfig):
    """Time a block against a wall-clock limit and log one verdict line for it."""
    results = pytestconfig.stash[_RESULTS]

    @contextmanager
    def run(number: int, label: str, limit: float):
        start = time.perf_counter()
        finished = False
        try:
            yield
            finished = True
        finally:
            elapsed = time.perf_counter() - start
            ok = finished and elapsed < limit
            results[number] = f"AC{number} {'PASS' if ok else 'FAIL'}  {label}  ({elapsed:.3f}s of {limit:g}s)"
        assert elapsed < limit, f"took {elapsed:.3f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
