import pytest

_results = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label = marker.args[0]
        if hasattr(item, "callspec"):
            label += " [" + ", ".join(f"{k}={v}" for k, v in item.callspec.params.items()) + "]"
        _results.append((label, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _results:
        terminalreporter.write_line(f"{status}  {label}")
