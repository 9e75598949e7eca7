import os

import pytest
import requests
from fastapi.testclient import TestClient

from api import DiracRoutes
from helpers.config import Config
from main import create_app

BASE_URL = os.getenv("API_BASE_URL", "http://localhost:8080")

FAILING_SL3 = {
    "algebra": {"family": "A", "rank": 2},
    "assignment": {
        "[1,0]": {"case": "3", "epsilon": 1},
        "[0,1]": {"case": "3", "epsilon": 1},
        "[1,1]": {"case": "1"},
    },
}


@pytest.fixture
def client():
    DiracRoutes.limiter.reset()
    return TestClient(create_app(Config()))


def test_ping(client):
    assert client.get("/").json() == {"ping": "pong!"}


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "healthy"
    assert body["services"]["workers"] == "eager"


def test_metrics_endpoint(client):
    client.get("/roots/A2")
    response = client.get("/metrics")
    assert response.status_code == 200
    assert "http_requests_total" in response.text


def test_roots(client):
    body = client.get("/roots/A2").json()
    assert body["algebra"] == "A2"
    assert len(body["positive_roots"]) == 3
    assert body["triples"] == [["[1,0]", "[0,1]", "[1,1]"]]


def test_roots_bad_type(client):
    assert client.get("/roots/Z9").status_code == 400


def test_verify(client):
    response = client.post("/verify", json={"structure": FAILING_SL3, "method": "both"})
    assert response.status_code == 200
    body = response.json()
    assert not body["involutive"]
    assert body["agree"]
    assert body["verdicts"][0]["witness"].startswith("Nij(")


def test_verify_rejects_bad_input(client):
    assert client.post("/verify", json={"structure": FAILING_SL3, "method": "vote"}).status_code == 400
    short = {"algebra": {"family": "A", "rank": 2}, "assignment": {"[1,0]": {"case": "1"}}}
    response = client.post("/verify", json={"structure": short})
    assert response.status_code == 400
    assert "[0,1]: missing from assignment" in response.json()["detail"]


def test_classify(client):
    body = client.post("/classify", json={"structure": FAILING_SL3, "with_omega": True}).json()
    assert [r["normal_form"] for r in body["roots"]] == ["c", "c", "a"]
    assert body["report"]["omega"] == {}


def test_construct(client):
    body = client.get("/construct/A2", params={"real_index": 4}).json()
    assert [c["case"] for c in body["assignment"].values()] == ["2", "2", "3"]
    assert client.get("/construct/A2", params={"real_index": 3}).status_code == 400
    assert client.get("/construct/A2", params={"real_index": 8}).status_code == 400


def test_tables(client):
    body = client.get("/tables/sl2").json()
    assert set(body["tables"]) == {"0", "2"}
    assert len(client.get("/tables/involutivity").json()["rows"]) == 10
    assert client.get("/tables/sl9").status_code == 400


def test_sweep(client):
    response = client.post("/sweep", json={"algebra": "A1"})
    assert response.status_code == 200
    assert response.json()["total"] == 17


def test_sweep_cap(client):
    assert client.post("/sweep", json={"algebra": "A4"}).status_code == 413


def test_sweep_rate_limit():
    DiracRoutes.limiter.reset()
    client = TestClient(create_app(Config(sweep_rate_limit="1/minute")))
    assert client.post("/sweep", json={"algebra": "A1", "cases": ["1"]}).status_code == 200
    assert client.post("/sweep", json={"algebra": "A1", "cases": ["1"]}).status_code == 429
    DiracRoutes.configure(Config())


@pytest.mark.integration
def test_live_roots():
    response = requests.get(f"{BASE_URL}/roots/B2", timeout=10)
    assert response.status_code == 200
    assert len(response.json()["triples"]) == 2


@pytest.mark.integration
def test_live_construct_and_verify():
    structure = requests.get(f"{BASE_URL}/construct/B2", params={"real_index": 4}, timeout=10).json()
    response = requests.post(f"{BASE_URL}/verify", json={"structure": structure}, timeout=30)
    assert response.status_code == 200
    assert response.json()["involutive"]


@pytest.mark.e2e
def test_live_sweep_through_workers():
    response = requests.post(f"{BASE_URL}/sweep", json={"algebra": "A2", "cases": ["1", "2", "3"]}, timeout=300)
    assert response.status_code == 200
    assert response.json()["agreement_rate"] == 1.0
