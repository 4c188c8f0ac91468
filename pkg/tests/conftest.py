import pytest

# Acceptance tests register a one-line label and optional observations here;
# the terminal summary prints a PASS/FAIL line per criterion.
ACCEPTANCE = {}
NOTES = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            ACCEPTANCE[item.nodeid] = [m.args[0], None]


def pytest_runtest_logreport(report):
    entry = ACCEPTANCE.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry[1] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for nodeid, (label, outcome) in ACCEPTANCE.items():
        tr.write_line(f"{outcome or 'NOT RUN'}: {label}")
        for note in NOTES.get(label, ()):
            tr.write_line(f"      {note}")


@pytest.fixture
def note(request):
    m = request.node.get_closest_marker("acceptance")
    label = m.args[0] if m else request.node.nodeid

    def add(text):
        NOTES.setdefault(label, []).append(text)
    return add
