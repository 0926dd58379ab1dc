"""Shared pytest hooks: always-visible acceptance-criterion summary."""

CRITERION_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_RESULTS:
            terminalreporter.write_line(line)
