import pytest

from fxpnet import ControlParameter

# The three control parameters of the test matrix, as (numerator, exponent).
MATRIX_MUS = [(121, 5), (3, 2), (7, 3)]
MODES = ["round", "floor", "ceil"]


@pytest.fixture
def mu121():
    return ControlParameter(121, 5)


_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion id and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = dict(report.user_properties).get("criterion")
    if label:
        _ACCEPTANCE.append((label, "PASS" if report.passed else "FAIL", report.nodeid))


@pytest.fixture(autouse=True)
def _criterion_label(request):
    marker = request.node.get_closest_marker("criterion")
    if marker:
        request.node.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict, _ in _ACCEPTANCE:
        terminalreporter.write_line(f"{verdict}  {label}")
