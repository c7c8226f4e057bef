ACCEPTANCE_LINES = []


def _order(line):
    tag, num = line.split()[:2]
    return int(num.rstrip(":")), tag != "criterion"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_order):
            terminalreporter.write_line(line)
