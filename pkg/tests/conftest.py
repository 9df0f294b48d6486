import contextlib
import time

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """`with criterion(n, title, limit_s) as notes:` records one pass/fail line for criterion n.

    The block fails if it raises or runs longer than `limit_s` seconds; `notes`
    is a list the block can append short details to.
    """
    lines = request.config.stash[_LINES]

    @contextlib.contextmanager
    def run(n: int, title: str, limit_s: float):
        notes: list[str] = []
        start = time.perf_counter()
        try:
            yield notes
        except BaseException as exc:
            lines.append((n, "FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0]))
            raise
        elapsed = time.perf_counter() - start
        detail = "; ".join(notes + [f"{elapsed:.1f}s of {limit_s:g}s"])
        ok = elapsed < limit_s
        lines.append((n, "PASS" if ok else "FAIL", title, detail))
        assert ok, f"criterion {n} took {elapsed:.1f}s, limit {limit_s:g}s"

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n, status, title, detail in sorted(lines):
        terminalreporter.write_line(f"[{status}] {n:2d}. {title} ({detail})")
