import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# one line per acceptance criterion, filled in by tests/test_acceptance.py
CRITERIA: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda s: (int(s.split()[0]), s)):
        terminalreporter.write_line(CRITERIA[key])
