import pytest

from circuits import DEUTERON

from mirrorc.frontend import compile_file
from mirrorc.passes import CANCEL, INLINE, run_pipeline

_ACCEPTANCE: list[tuple[int, str, str]] = []


@pytest.fixture(scope="session")
def deuteron_module():
    return compile_file(DEUTERON)


@pytest.fixture(scope="session")
def deuteron_base(deuteron_module):
    return run_pipeline(deuteron_module, [INLINE, CANCEL]).entry_kernel


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _ACCEPTANCE.append((number, title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}")
