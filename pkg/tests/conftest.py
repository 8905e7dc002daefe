"""Shared pytest plumbing: collects the acceptance-criteria pass/fail
lines and echoes them after the run (pytest captures stdout of passing
tests, so the summary hook is what makes the lines visible)."""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
