"""HTTP surface: endpoints, status mapping, determinism."""

import json
import pathlib

import pytest
from fastapi.testclient import TestClient

from padicmf.service import app

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def job_body(name, **extra):
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        body = {"job": json.load(fh)}
    body.update(extra)
    return body


def test_info_and_health(client):
    assert client.get("/").json()["name"] == "padicmf"
    assert client.get("/healthz").json() == {"status": "ok"}


def test_validate_ok(client):
    r = client.post("/v1/validate", json=job_body("counterexample.json"))
    assert r.status_code == 200
    data = r.json()
    assert data["status"] == "ok" and data["passed"] is True
    assert any("frobenius-isomorphism" in line for line in data["report"])


def test_validate_failure_is_invalid_status(client):
    r = client.post("/v1/validate", json=job_body("invalid_frobenius.json"))
    assert r.status_code == 200
    data = r.json()
    assert data["status"] == "invalid" and data["passed"] is False


def test_hodge(client):
    r = client.post("/v1/hodge", json=job_body("etale.json"))
    assert r.json()["hodge"] == 2
    r = client.post("/v1/hodge", json=job_body("counterexample.json"))
    assert r.json()["hodge"] == 1


def test_newton_both_points(client):
    for point in ("closed", "generic"):
        r = client.post("/v1/newton",
                        json=job_body("counterexample.json", point=point))
        data = r.json()
        assert data["newton"] == "1" and data["point"] == point


def test_weakadm_auto_with_lattices(client):
    r = client.post("/v1/weakadm",
                    json=job_body("counterexample.json", auto=True))
    data = r.json()
    assert data["status"] == "ok" and data["admissible"] is True
    assert data["mode"] == "auto-distinct-slopes"
    assert len(data["lattices"]) == 2
    assert all(lat["passed"] for lat in data["lattices"])


def test_weakadm_supplied_subobjects(client):
    body = job_body("counterexample.json", auto=False)
    r = client.post("/v1/weakadm", json=body)
    data = r.json()
    assert data["admissible"] is True
    assert data["mode"] == "supplied-subobjects"


def test_weakadm_failure(client):
    r = client.post("/v1/weakadm",
                    json=job_body("not_weakly_admissible.json", auto=True))
    data = r.json()
    assert data["status"] == "ok" and data["admissible"] is False


def test_perturbed_lattice_fails(client):
    r = client.post("/v1/weakadm",
                    json=job_body("perturbed_lattice.json", auto=True))
    data = r.json()
    assert data["admissible"] is True
    assert data["lattices"][0]["passed"] is False
    names = [c["name"] for c in data["lattices"][0]["checks"]
             if c["passed"] is False]
    assert "phi-fil1-divisible-by-p" in names


def test_bpair_rank(client):
    r = client.post("/v1/bpair-rank", json=job_body("counterexample.json"))
    assert r.json()["rank"] == 1
    r = client.post("/v1/bpair-rank", json=job_body("admissible_mixed.json"))
    assert r.json()["rank"] == 2


def test_classify(client):
    cases = [("counterexample.json", "WEAKLY_ADMISSIBLE_NON_ADMISSIBLE"),
             ("admissible_mixed.json", "ADMISSIBLE_MIXED"),
             ("etale.json", "ETALE"),
             ("multiplicative.json", "MULTIPLICATIVE"),
             ("not_weakly_admissible.json", "NOT_WEAKLY_ADMISSIBLE")]
    for fixture, expected in cases:
        r = client.post("/v1/classify", json=job_body(fixture))
        assert r.status_code == 200
        assert r.json()["classification"] == expected


def test_breuil_export(client):
    r = client.post("/v1/breuil", json=job_body("admissible_mixed.json"))
    data = r.json()
    assert data["status"] == "ok" and data["passed"] is True
    export = data["export"]
    assert export["basis"] == ["e1", "e2"]
    assert export["frobenius_exponents"] == [1, 0]
    assert "witnesses" in export


def test_breuil_rejects_non_admissible(client):
    r = client.post("/v1/breuil", json=job_body("counterexample.json"))
    assert r.status_code == 400
    assert r.json()["status"] == "invalid"


def test_schema_violation_is_422(client):
    r = client.post("/v1/classify", json={"job": {"profile": {"p": 3}}})
    assert r.status_code == 422


def test_core_invalid_input_is_400(client):
    body = job_body("counterexample.json")
    body["job"]["profile"]["p"] = 4
    r = client.post("/v1/classify", json=body)
    assert r.status_code == 400
    assert r.json()["error"] == "InvalidInput"


def test_determinism(client):
    body = job_body("counterexample.json")
    r1 = client.post("/v1/classify", json=body)
    r2 = client.post("/v1/classify", json=body)
    assert r1.content == r2.content


def test_echo_round_trip(client):
    body = job_body("counterexample.json")
    r = client.post("/v1/echo", json=body)
    doc = r.json()["module"]
    body2 = {"job": dict(body["job"], module=doc)}
    r2 = client.post("/v1/echo", json=body2)
    assert r2.json()["module"] == doc
