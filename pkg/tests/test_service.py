import warnings

import pytest

from conftest import load_fixture

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from reasonkit.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"


class TestExplain:
    def test_full_report(self, client):
        response = client.post(
            "/explain",
            json={
                "model": load_fixture("disease_tree.model.json"),
                "instance": load_fixture("patient_overweight.instance.json"),
                "kinds": ["cr", "sr", "gsr", "nr", "gnr"],
            },
        )
        assert response.status_code == 200
        body = response.json()
        report = body["report"]
        assert report["decision"] == "yes"
        sr = {item["rendered"] for item in report["explanations"]["sr"]["items"]}
        assert sr == {
            "diabetic=yes AND weight=overweight",
            "diabetic=yes AND blood_type=A",
        }
        gnr = {item["rendered"] for item in report["explanations"]["gnr"]["items"]}
        assert gnr == {
            "diabetic=yes",
            "weight=overweight OR blood_type in {A,B,AB}",
            "weight in {underweight,overweight} OR blood_type in {A,B}",
        }
        assert "decision: yes" in body["text"]

    def test_threshold_rendering(self, client):
        response = client.post(
            "/explain",
            json={
                "model": load_fixture("bmi_tree.model.json"),
                "instance": load_fixture("adult_high_bmi.instance.json"),
                "kinds": ["gsr"],
            },
        )
        assert response.status_code == 200
        items = response.json()["report"]["explanations"]["gsr"]["items"]
        phrases = {item["threshold_rendered"] for item in items}
        assert phrases == {
            "age >= 18 AND bmi >= 27",
            "age >= 40 AND bmi >= 25",
        }

    def test_targeted_explanation(self, client):
        response = client.post(
            "/explain",
            json={
                "model": load_fixture("loan_graph.model.json"),
                "instance": {
                    "format": "instance/v1",
                    "values": {"income": "medium", "credit": "ok"},
                },
                "kinds": ["gnr"],
                "target_class": "large_loan",
            },
        )
        assert response.status_code == 200
        assert response.json()["report"]["target_class"] == "large_loan"

    def test_missing_features_are_an_input_error(self, client):
        response = client.post(
            "/explain",
            json={
                "model": load_fixture("disease_tree.model.json"),
                "instance": {"format": "instance/v1", "values": {"diabetic": "yes"}},
                "kinds": ["cr"],
            },
        )
        assert response.status_code == 400
        detail = response.json()["detail"]
        assert detail["kind"] == "input"
        assert "weight" in detail["message"] and "blood_type" in detail["message"]

    def test_unknown_kind_is_an_input_error(self, client):
        response = client.post(
            "/explain",
            json={
                "model": load_fixture("disease_tree.model.json"),
                "instance": load_fixture("patient_overweight.instance.json"),
                "kinds": ["qq"],
            },
        )
        assert response.status_code == 400

    def test_malformed_model_is_an_input_error(self, client):
        response = client.post(
            "/explain",
            json={
                "model": {"format": "classifier-model/v1"},
                "instance": {"values": {}},
                "kinds": ["cr"],
            },
        )
        assert response.status_code == 400


class TestCompile:
    def test_dnf_document(self, client):
        response = client.post(
            "/compile",
            json={
                "model": load_fixture("ternary_graph.model.json"),
                "class": "c1",
                "method": "dnf",
            },
        )
        assert response.status_code == 200
        doc = response.json()["document"]
        assert doc["format"] == "formula-document/v1"
        assert doc["method"] == "dnf"
        assert doc["formula"]["op"] == "or"

    def test_graph_method_on_nbc(self, client):
        response = client.post(
            "/compile",
            json={
                "model": load_fixture("pregnancy_nbc.model.json"),
                "method": "graph",
            },
        )
        assert response.status_code == 200
        doc = response.json()["document"]
        assert doc["model"]["type"] == "decision_graph"

    def test_missing_class_is_an_input_error(self, client):
        response = client.post(
            "/compile",
            json={
                "model": load_fixture("ternary_graph.model.json"),
                "method": "dnf",
            },
        )
        assert response.status_code == 400


class TestVerify:
    def test_all_fixtures_pass(self, client):
        for name in (
            "disease_tree.model.json",
            "ternary_graph.model.json",
            "bmi_tree.model.json",
            "pregnancy_nbc.model.json",
            "small_forest.model.json",
            "step_net.model.json",
            "linear_rule.model.json",
            "loan_graph.model.json",
        ):
            response = client.post(
                "/verify", json={"model": load_fixture(name), "seed": 7}
            )
            assert response.status_code == 200, name
            body = response.json()
            assert body["passed"], (name, body)

    def test_capacity_maps_to_413(self, client):
        response = client.post(
            "/verify",
            json={"model": load_fixture("disease_tree.model.json"), "budget": 3},
        )
        assert response.status_code == 413
        assert response.json()["detail"]["kind"] == "capacity"
