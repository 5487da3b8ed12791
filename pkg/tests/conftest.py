import contextlib

ACCEPTANCE_LINES = []


@contextlib.contextmanager
def criterion(number, title):
    """Record one PASS/FAIL line for the terminal summary; failures re-raise."""
    details = []
    try:
        yield details
    except BaseException:
        ACCEPTANCE_LINES.append(f"[FAIL] criterion {number}: {title}")
        raise
    suffix = f" ({'; '.join(details)})" if details else ""
    ACCEPTANCE_LINES.append(f"[PASS] criterion {number}: {title}{suffix}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
