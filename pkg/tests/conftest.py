import json
from pathlib import Path

import pytest

from reasonkit.documents import load_model, parse_instance

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(n, title): groups a test under one acceptance criterion",
    )


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def disease():
    return load_model(FIXTURES / "disease_tree.model.json")


@pytest.fixture(scope="session")
def disease_overweight(disease):
    doc = load_fixture("patient_overweight.instance.json")
    return parse_instance(disease, doc)


@pytest.fixture(scope="session")
def disease_underweight(disease):
    doc = load_fixture("patient_underweight.instance.json")
    return parse_instance(disease, doc)


@pytest.fixture(scope="session")
def ternary():
    return load_model(FIXTURES / "ternary_graph.model.json")


@pytest.fixture(scope="session")
def bmi():
    return load_model(FIXTURES / "bmi_tree.model.json")


@pytest.fixture(scope="session")
def loan():
    return load_model(FIXTURES / "loan_graph.model.json")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    outcomes = {}
    titles = {}
    for kind in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(kind, []):
            marker = _criterion_of(report)
            if marker is None:
                continue
            n, title = marker
            titles[n] = title
            ok = kind == "passed"
            outcomes[n] = outcomes.get(n, True) and ok
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        mark = "PASS" if outcomes[n] else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {n}: {titles[n]}")


def _criterion_of(report):
    for name, value in getattr(report, "user_properties", ()):
        if name == "criterion":
            return value
    return None


@pytest.fixture(autouse=True)
def _record_criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        record_property("criterion", (marker.args[0], marker.args[1]))
