"""Shared pytest plumbing: surfaces acceptance verdicts in the summary."""

acceptance_lines = []  # appended by test_acceptance._verdict


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
