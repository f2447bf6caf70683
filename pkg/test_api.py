"""
HTTP endpoint tests for ping, co-arrays, span checks and Monte Carlo runs.
"""

import math

import pytest
from fastapi.testclient import TestClient

from app.main import app

client = TestClient(app)

SMALL_EXPERIMENT = {
    "snr_grid_db": [10.0],
    "snapshots": 100,
    "trials": 2,
    "grid_step_deg": 0.1,
}


def test_root():
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["message"] == "SDCA Lab"


def test_ping():
    response = client.get("/api/ping")
    assert response.status_code == 200
    assert response.json()["message"] == "pong"


def test_coarray():
    response = client.post("/api/coarray", json={"positions": [0, 1, 2, 3, 10, 17]})
    assert response.status_code == 200
    data = response.json()
    assert data["contiguous_segment"] == [-20, 20]
    assert data["partition"]["d2bar"]["lags"] == [4, 5, 6, 11, 12, 13, 18, 19, 20, 27, 34]
    assert data["difference"]["weights"]["0"] == 6


def test_coarray_rejects_unsorted_positions():
    response = client.post("/api/coarray", json={"positions": [0, 3, 1]})
    assert response.status_code == 400


def test_lemma_verify():
    response = client.post("/api/lemma/verify", json={"phi_points": 4})
    assert response.status_code == 200
    data = response.json()
    assert len(data["rows"]) == 4
    assert data["holds_at"] == pytest.approx([0.0, math.pi])


def test_span_with_complex_pseudo_power():
    payload = {
        "doas_deg": [10.0],
        "g": [{"re": 1.0}],
        "g_tilde": [{"re": 0.0, "im": 1.0}],
    }
    response = client.post("/api/lemma/span", json=payload)
    assert response.status_code == 200
    data = response.json()
    assert not data["holds"]
    assert not data["lemma_condition"]
    assert data["residual"] == pytest.approx(math.sqrt(1496) / 45, abs=1e-9)


def test_span_with_real_power():
    payload = {"doas_deg": [-15.0, 25.0], "g": [{"re": 1.0}, {"re": 0.5}], "g_tilde": [{"re": 1.0}, {"re": 0.5}]}
    data = client.post("/api/lemma/span", json=payload).json()
    assert data["holds"]
    assert data["lemma_condition"]
    assert data["eta"] is None


def test_span_length_mismatch():
    payload = {"doas_deg": [-15.0, 25.0], "g": [{"re": 1.0}], "g_tilde": [{"re": 1.0}]}
    assert client.post("/api/lemma/span", json=payload).status_code == 400


def test_spectrum():
    response = client.post("/api/experiments/spectrum", json=SMALL_EXPERIMENT)
    assert response.status_code == 200
    data = response.json()
    assert len(data["theta_deg"]) == 1801
    assert len(data["pseudospectrum"]) == 1801
    assert len(data["estimate_deg"]) == 2


def test_sweep():
    response = client.post("/api/experiments/sweep", json=SMALL_EXPERIMENT)
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert [row["model"] for row in rows] == ["simplified", "practical"]
    assert all(row["trials"] == 2 for row in rows)


def test_sweep_rejects_invalid_config():
    response = client.post("/api/experiments/sweep", json={**SMALL_EXPERIMENT, "trials": 0})
    assert response.status_code == 422
