"""HTTP endpoints, payload shapes and the error-to-status mapping."""

import pytest
from fastapi.testclient import TestClient

from rankin.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_qexp_eisenstein(client):
    r = client.post("/qexp", json={"spec": "eisE k=2 N=4 p=3", "prec": 6})
    assert r.status_code == 200
    body = r.json()
    assert body["coefficients"] == [0, 0, -4, 0, 4, 0]
    assert body["level"] == 12
    assert body["weight"] == "LocAlgChar(2, p=3)"
    assert body["prec"] == 6


def test_qexp_stabilised_form(client):
    r = client.post("/qexp", json={"spec": "form 1.12.a.a stab=alpha p=5",
                                   "prec": 4})
    assert r.status_code == 200
    body = r.json()
    assert body["coefficients"][:3] == [0, 1, -24]
    # stabilised coefficients at p = 5 live in a quadratic extension
    assert isinstance(body["coefficients"][3], (int, str, dict))


def test_verify_euler_suite(client):
    r = client.post("/verify", json={"suite": "euler", "f1": "11.2.a.a",
                                     "f2": "11.2.a.a", "lmax": 20,
                                     "chi": "triv"})
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] is True
    assert body["total"] == 7
    assert body["passed"] == 7
    assert body["cases"][0]["case"] == "euler"
    assert body["cases"][0]["params"]["f1"] == "11.2.a.a"


def test_verify_slice_suite(client):
    r = client.post("/verify", json={"suite": "slice", "k1": [8], "k2": [2],
                                     "tau": [0, 1], "p": 3, "prec": 40})
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] is True
    assert body["total"] == 4
    assert body["passed"] == 4


def test_verify_twist_suite(client):
    r = client.post("/verify", json={"suite": "twist", "k1": [8], "k2": [3],
                                     "j": [4], "chi": "quad3", "prec": 30})
    assert r.status_code == 200
    assert r.json()["ok"] is True


def test_lvalue(client):
    r = client.post("/lvalue", json={"f1": "1.12.a.a", "f2": "11.2.a.a",
                                     "j": 10, "digits": 15, "nmax": 2000})
    assert r.status_code == 200
    body = r.json()
    assert body["re"].startswith("1.0445")
    assert body["s"] == 10
    assert body["route"] == "convolution"
    assert body["digits"] == 15
    assert float(body["tail_bound"]) > 0


def test_interp(client):
    r = client.post("/interp", json={"f1": "1.12.a.a", "f2": "11.2.a.a",
                                     "j": 10, "p": 5, "digits": 15,
                                     "lvalue": "1.0445638331334",
                                     "petersson": "1.0"})
    assert r.status_code == 200
    body = r.json()
    assert body["regime"] == "crystalline"
    assert body["exact"]["euler_ratio"] is True
    assert body["exact"]["gauss_block"] is True
    assert body["exact"]["archimedean"] is False
    assert body["routes_match"] is None
    assert body["total"]["re"].startswith("3.5523526468")
    # individual factors are flattened into the payload
    for key in ("euler_ratio", "archimedean", "gauss_block", "lvalue"):
        assert "re" in body[key] and "im" in body[key]


def test_forms_listing_and_record(client):
    r = client.get("/forms")
    assert r.status_code == 200
    assert r.json()["labels"] == ["1.12.a.a", "11.2.a.a"]
    r = client.get("/forms/11.2.a.a")
    assert r.status_code == 200
    rec = r.json()["record"]
    assert rec["k"] == 2
    assert rec["N_f"] == 11


def test_unknown_label_is_404_on_get(client):
    r = client.get("/forms/99.99.z.z")
    assert r.status_code == 404
    assert "unknown eigenform label" in r.json()["error"]


def test_bad_spec_is_400(client):
    r = client.post("/qexp", json={"spec": "bogus k=2", "prec": 4})
    assert r.status_code == 400
    assert "expect eisE" in r.json()["error"]


def test_semantic_errors_are_422(client):
    # outside the convergence region
    r = client.post("/lvalue", json={"f1": "1.12.a.a", "f2": "11.2.a.a",
                                     "j": 6})
    assert r.status_code == 422
    assert "convergence region" in r.json()["error"]
    # unknown label inside a computation payload
    r = client.post("/lvalue", json={"f1": "9.9.z.z", "f2": "11.2.a.a",
                                     "j": 10})
    assert r.status_code == 422
    assert "unknown eigenform label" in r.json()["error"]


def test_missing_field_is_422(client):
    r = client.post("/qexp", json={"prec": 4})
    assert r.status_code == 422
