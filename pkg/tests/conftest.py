import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# acceptance verdicts collected by test_acceptance, echoed after the run
VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(VERDICTS):
        terminalreporter.write_line(line)
