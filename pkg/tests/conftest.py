import pytest

from grpgeom import WordContext, build_group


@pytest.fixture(scope="session")
def S3():
    return build_group("symmetric(3)")


@pytest.fixture(scope="session")
def ctx2():
    return WordContext(2)


def transpositions(G):
    return [a for a in range(G.order) if a != G.identity and G.element_order(a) == 2]


def three_cycles(G):
    return [a for a in range(G.order) if G.element_order(a) == 3]


_criteria: dict = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _criteria[props["criterion"]] = ("PASS" if report.passed else "FAIL", props.get("detail", ""))
    else:
        name = report.nodeid.split("::")[-1]
        _criteria[name] = ("FAIL", f"{name} raised before recording a result")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=str):
        status, detail = _criteria[key]
        terminalreporter.write_line(f"criterion {key}: {status} - {detail}")
