import time
from contextlib import contextmanager

ACCEPTANCE = {}


def ints(v):
    return tuple(int(x) for x in v)


@contextmanager
def criterion(num, label, budget=None):
    """Record a pass/fail line for an acceptance criterion, enforcing its time budget."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert budget is None or elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ACCEPTANCE.setdefault(num, []).append((label, ok, elapsed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label} {'ok' if good else 'FAILED'} ({t:.2f}s)" for label, good, t in parts)
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
