import numpy as np
import pytest
from fastapi.testclient import TestClient

from planfit import (
    Dms,
    EstimateState,
    estimate,
    ingest,
    make_observation,
)
from planfit.service import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


def _new_session(client, **kwargs):
    resp = client.post("/sessions", json=kwargs)
    assert resp.status_code == 200
    return resp.json()["id"]


ROW1 = {"supply": [10, 25], "demand": [5, 15, 15]}


def test_create_and_get_session(client):
    sid = _new_session(client)
    resp = client.get(f"/sessions/{sid}")
    body = resp.json()
    assert body["m"] == 2 and body["n"] == 3
    assert body["steps"] == 0
    assert body["pending"] is False


def test_create_rejects_bad_shape(client):
    resp = client.post("/sessions", json={"m": 3, "n": 3})
    assert resp.status_code == 422
    assert resp.json()["error"] == "UnsupportedDimension"


def test_create_rejects_bad_mode(client):
    resp = client.post("/sessions", json={"mode": "wizard"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "DomainError"


def test_unknown_session_404(client):
    resp = client.get("/sessions/doesnotexist")
    assert resp.status_code == 404
    assert resp.json()["error"] == "UnknownSession"


def test_situation_geometry(client):
    sid = _new_session(client)
    resp = client.post(f"/sessions/{sid}/situation", json=ROW1)
    assert resp.status_code == 200
    geo = resp.json()["situation"]
    assert geo["d"] == 2
    assert len(geo["constraints"]) == 6
    by_point = {tuple(np.round(v["point"], 6)): v for v in geo["vertices"]}
    assert (5.0, 15.0) in by_point
    # each clickable vertex carries its full reconstructed plan
    assert by_point[(5.0, 15.0)]["plan"] == [[0, 10, 0], [5, 5, 15]]
    assert all(e["constraint"] is not None for e in geo["edges"])


def test_situation_shape_must_match_session(client):
    sid = _new_session(client)
    resp = client.post(f"/sessions/{sid}/situation",
                       json={"supply": [5, 5, 5], "demand": [5, 5, 5]})
    assert resp.status_code == 422
    assert resp.json()["error"] == "ShapeError"


def test_unbalanced_situation_422(client):
    sid = _new_session(client)
    resp = client.post(f"/sessions/{sid}/situation",
                       json={"supply": [10, 20], "demand": [5, 15, 15]})
    assert resp.status_code == 422
    assert resp.json()["error"] == "BalanceError"


def test_second_situation_conflicts(client):
    sid = _new_session(client)
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    resp = client.post(f"/sessions/{sid}/situation", json=ROW1)
    assert resp.status_code == 409
    assert resp.json()["error"] == "PendingSituation"


def test_get_situation_when_none_pending(client):
    sid = _new_session(client)
    resp = client.get(f"/sessions/{sid}/situation")
    assert resp.status_code == 404
    assert resp.json()["error"] == "NoPendingSituation"


def test_decision_flow(client):
    sid = _new_session(client)
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    resp = client.post(f"/sessions/{sid}/decision", json={"point": [5, 15]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["step"] == 1
    assert body["observation"]["pair"] == [1, 4]
    assert body["estimate"] == pytest.approx([-0.9238795, 0.3826834], abs=1e-6)

    # situation consumed; next decision conflicts
    resp = client.post(f"/sessions/{sid}/decision", json={"point": [5, 15]})
    assert resp.status_code == 409
    assert resp.json()["error"] == "NoPendingSituation"


def test_decision_must_be_vertex(client):
    sid = _new_session(client)
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    resp = client.post(f"/sessions/{sid}/decision", json={"point": [8, 14]})
    assert resp.status_code == 422
    assert resp.json()["error"] == "NotAVertex"
    # the pending situation survives a rejected decision
    assert client.get(f"/sessions/{sid}/situation").status_code == 200


def test_generate_situation(client):
    sid = _new_session(client)
    resp = client.post(f"/sessions/{sid}/situation/generate",
                       json={"lo": 1, "hi": 50, "seed": 9})
    assert resp.status_code == 200
    geo = resp.json()["situation"]
    assert sum(geo["supply"]) == pytest.approx(sum(geo["demand"]))
    again = client.post(f"/sessions/{sid}/situation/generate",
                        json={"lo": 1, "hi": 50, "seed": 9})
    assert again.status_code == 409


def test_estimate_endpoint_matches_library(client, dms_rows, decisions):
    sid = _new_session(client)
    state = EstimateState()
    for dms, decision in zip(dms_rows, decisions):
        client.post(f"/sessions/{sid}/situation", json={
            "supply": dms.supply.tolist(), "demand": dms.demand.tolist()})
        resp = client.post(f"/sessions/{sid}/decision",
                           json={"point": decision["free_vars"].tolist()})
        assert resp.status_code == 200
        ingest(state, make_observation(dms, decision["free_vars"]))

    payload = client.get(f"/sessions/{sid}/estimate").json()
    assert payload["steps"] == 25
    expected = estimate(state).e
    assert np.allclose(payload["estimate"], expected, atol=1e-12)
    assert len(payload["history"]) == 25
    assert len(payload["deltas"]) == 24
    assert payload["stop"]["stop"] is True


def test_decisions_log(client):
    sid = _new_session(client)
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    client.post(f"/sessions/{sid}/decision", json={"point": [5, 15]})
    body = client.get(f"/sessions/{sid}/decisions").json()
    assert len(body["decisions"]) == 1
    entry = body["decisions"][0]
    assert entry["source"] == "human"
    assert entry["pair"] == [1, 4]


def test_proposal_needs_situation_and_observations(client, polygon_row):
    sid = _new_session(client)
    resp = client.get(f"/sessions/{sid}/proposal")
    assert resp.status_code == 409
    assert resp.json()["error"] == "NoPendingSituation"

    client.post(f"/sessions/{sid}/situation", json={
        "supply": polygon_row.supply.tolist(),
        "demand": polygon_row.demand.tolist()})
    resp = client.get(f"/sessions/{sid}/proposal")
    assert resp.status_code == 409
    assert resp.json()["error"] == "NoObservations"


def test_proposal_after_replay(client, dms_rows, decisions, polygon_row):
    sid = _new_session(client)
    for dms, decision in zip(dms_rows, decisions):
        client.post(f"/sessions/{sid}/situation", json={
            "supply": dms.supply.tolist(), "demand": dms.demand.tolist()})
        client.post(f"/sessions/{sid}/decision",
                    json={"point": decision["free_vars"].tolist()})

    client.post(f"/sessions/{sid}/situation", json={
        "supply": polygon_row.supply.tolist(),
        "demand": polygon_row.demand.tolist()})
    proposal = client.get(f"/sessions/{sid}/proposal").json()
    assert proposal["vertex"] == pytest.approx([0.0, 2.0], abs=1e-9)
    assert proposal["active_pair"] == [4, 5]

    approved = client.post(f"/sessions/{sid}/proposal/approve").json()
    assert approved["step"] == 26
    assert approved["observation"]["pair"] == [4, 5]


def test_proposal_correction(client):
    sid = _new_session(client)
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    client.post(f"/sessions/{sid}/decision", json={"point": [5, 15]})
    client.post(f"/sessions/{sid}/situation", json=ROW1)
    resp = client.post(f"/sessions/{sid}/proposal/correct",
                       json={"point": [15, 5]})
    assert resp.status_code == 200
    body = client.get(f"/sessions/{sid}/decisions").json()
    assert body["decisions"][1]["source"] == "corrected"


def test_event_sourcing_rebuild(tmp_path, dms_rows, decisions):
    data_dir = tmp_path / "events"
    app = create_app(data_dir)
    with TestClient(app) as client:
        sid = _new_session(client, window=None)
        for dms, decision in zip(dms_rows[:10], decisions[:10]):
            client.post(f"/sessions/{sid}/situation", json={
                "supply": dms.supply.tolist(), "demand": dms.demand.tolist()})
            client.post(f"/sessions/{sid}/decision",
                        json={"point": decision["free_vars"].tolist()})
        before = client.get(f"/sessions/{sid}/estimate").json()

    # a fresh app over the same event files rebuilds the identical state
    fresh = create_app(data_dir)
    with TestClient(fresh) as client:
        after = client.get(f"/sessions/{sid}/estimate").json()
        assert after["steps"] == before["steps"]
        assert np.allclose(after["estimate"], before["estimate"], atol=1e-12)
        listing = client.get("/sessions").json()["sessions"]
        assert [s["id"] for s in listing] == [sid]


def test_delete_session(client):
    sid = _new_session(client)
    resp = client.delete(f"/sessions/{sid}")
    assert resp.status_code == 200
    assert client.get(f"/sessions/{sid}").status_code == 404


def test_pending_situation_survives_rebuild(tmp_path):
    data_dir = tmp_path / "events"
    app = create_app(data_dir)
    with TestClient(app) as client:
        sid = _new_session(client)
        client.post(f"/sessions/{sid}/situation", json=ROW1)

    fresh = create_app(data_dir)
    with TestClient(fresh) as client:
        resp = client.get(f"/sessions/{sid}/situation")
        assert resp.status_code == 200
        assert resp.json()["situation"]["supply"] == [10.0, 25.0]
