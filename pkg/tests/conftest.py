import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion outcome: ``criterion(n, text)`` then assert."""
    state = {}

    def record(number, text):
        state["key"] = (number, text)
        _CRITERIA[(number, text)] = None

    yield record
    if "key" in state:
        rep = getattr(request.node, "rep_call", None)
        _CRITERIA[state["key"]] = bool(rep and rep.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, text), ok in sorted(_CRITERIA.items()):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {text}")
