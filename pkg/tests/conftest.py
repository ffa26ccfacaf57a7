import time
from contextlib import contextmanager

import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def criterion(request):
    """Context manager that times one acceptance criterion and records a
    PASS/FAIL line for the terminal summary."""
    lines = request.config.stash[_LINES_KEY]

    @contextmanager
    def run(number, title, limit=None):
        info = {"detail": ""}
        t0 = time.perf_counter()
        ok = False
        try:
            yield info
            ok = True
        finally:
            dt = time.perf_counter() - t0
            if ok and limit is not None and dt >= limit:
                ok = False
                info["detail"] += f" (over the {limit:g}s limit)"
            line = (f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: "
                    f"{info['detail'].strip()} [{dt:.2f}s]")
            lines.append(line)
            print(line)
        if limit is not None:
            assert dt < limit, f"criterion {number} took {dt:.1f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
