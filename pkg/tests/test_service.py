from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from secstate.service.app import create_app
from test_simulator import small_scenario


@pytest.fixture
def client() -> TestClient:
    return TestClient(create_app())


def load(client: TestClient, doc: dict | None = None, **body) -> dict:
    payload = {"document": doc if doc is not None else small_scenario(), **body}
    resp = client.post("/scenario", json=payload)
    assert resp.status_code == 200, resp.text
    return resp.json()


# -- lifecycle


def test_health_and_not_loaded(client):
    health = client.get("/health").json()
    assert health["status"] == "ok" and health["loaded"] is False
    resp = client.get("/state")
    assert resp.status_code == 409
    assert resp.json()["error"] == "NotLoadedError"


def test_load_inline_document(client):
    info = load(client)
    assert info["name"] == "unit"
    assert (info["domains"], info["nfs"], info["intents"]) == (2, 2, 1)
    assert client.get("/health").json()["loaded"] is True
    scenario = client.get("/scenario").json()
    assert scenario["horizon"] == 5.0
    assert scenario["document"]["name"] == "unit"
    assert scenario["config"]["scan_period"] == 1.0


def test_load_from_path(client, tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(small_scenario(name="from-file")))
    info = client.post("/scenario", json={"path": str(path)}).json()
    assert info["name"] == "from-file"
    missing = client.post("/scenario", json={"path": str(tmp_path / "nope.json")})
    assert missing.status_code == 422


def test_load_wants_exactly_one_source(client):
    assert client.post("/scenario", json={}).status_code == 422
    both = {"document": small_scenario(), "path": "x.json"}
    assert client.post("/scenario", json=both).status_code == 422


def test_load_replaces_previous_engine(client):
    load(client)
    load(client, small_scenario(name="second"))
    assert client.get("/scenario").json()["name"] == "second"
    assert client.get("/state").json()["clock"] == 0.0


def test_invalid_document_is_rejected(client):
    resp = client.post("/scenario", json={"document": {"name": "bad", "bogus": 1}})
    assert resp.status_code == 422
    assert "bogus" in resp.json()["detail"]


# -- state reads


def test_full_state_shape(client):
    load(client)
    state = client.get("/state").json()
    assert state["clock"] == 0.0 and state["scan_count"] == 0
    assert state["network"]["scope"] == "network"
    assert set(state["domains"]) == {"d1", "d2"}
    assert state["states"] == {"gnb": "Secure", "core": "Secure"}
    assert [i["id"] for i in state["intents"]] == ["floor"]
    nf = state["nfs"]["gnb"]
    # scores are flat fields of the snapshot, with per-NF detail attached
    for key in ("controls", "misconfig", "surface", "composite"):
        assert 0.0 <= nf[key] <= 1.0
    assert set(nf["measures"]) == {
        "noncompliant_ratio",
        "impact",
        "patch_delay",
        "criticality",
        "neighborhood",
        "local_score",
    }
    assert set(nf["surface_by_category"]) == {
        "3GPP-Radio",
        "3GPP-Network",
        "O-RAN",
        "OAM",
        "Platform",
    }


def test_scope_endpoints(client):
    doc = small_scenario()
    doc["domains"].append({"id": "empty", "name": "Empty"})
    load(client, doc)
    assert client.get("/state/network").json()["scope"] == "network"
    domain = client.get("/state/domain/d1").json()
    assert domain["scope"] == "domain" and domain["id"] == "d1"
    nf = client.get("/state/nf/gnb").json()
    assert nf["scope"] == "nf" and nf["id"] == "gnb"
    assert client.get("/state/domain/ghost").status_code == 404
    assert client.get("/state/nf/ghost").status_code == 404
    assert client.get("/state/domain/empty").status_code == 409


def test_historical_state_query(client):
    load(client)
    client.post("/sim/run", json={"until": 1.0})
    frozen = client.get("/state").json()
    client.post("/sim/run", json={"until": 3.0})
    past = client.get("/state?at=1.0").json()
    assert past["at"] == 1.0
    assert past["digest"] == frozen["digest"]
    assert past["nfs"] == frozen["nfs"]
    assert client.get("/state?at=-1").status_code == 422


# -- lifecycle machine


def test_fsm_routes(client):
    load(client)
    table = client.get("/fsm/table").json()
    assert table["initial"] == "Secure" and len(table["edges"]) == 8
    records = client.get("/fsm").json()
    assert set(records) == {"gnb", "core"}
    one = client.get("/fsm/gnb").json()
    assert one["nf"] == "gnb" and one["current"] == "Secure" and one["history"] == []
    assert client.get("/fsm/ghost").status_code == 404


def test_fsm_history_after_change(client):
    load(client)
    client.post(
        "/events",
        json={"kind": "UEAttached", "nf": "gnb", "ep": "cell", "time": 0.5, "count": 3},
    )
    client.post("/sim/step", json={"count": 1})
    one = client.get("/fsm/gnb").json()
    assert one["current"] == "AttackSurfaceExpanded"
    assert [h["trigger"] for h in one["history"]] == ["ChangeDetected"]
    assert one["history"][0]["from"] == "Secure"


# -- events


def test_inject_and_pending(client):
    load(client)
    resp = client.post(
        "/events", json={"kind": "AttackDetected", "nf": "gnb", "time": 1.5}
    )
    assert resp.status_code == 202
    accepted = resp.json()
    assert accepted["event"]["kind"] == "AttackDetected" and accepted["event"]["id"] == 1
    pending = client.get("/events/pending").json()
    assert [e["id"] for e in pending["events"]] == [1]
    # omitted time schedules at the current clock
    now = client.post("/events", json={"kind": "AttackDetected", "nf": "core"}).json()
    assert now["event"]["time"] == 0.0


def test_inject_validation_statuses(client):
    load(client)
    unknown_nf = client.post("/events", json={"kind": "AttackDetected", "nf": "ghost", "time": 1.0})
    assert unknown_nf.status_code == 404
    bad_kind = client.post("/events", json={"kind": "Meteor", "nf": "gnb", "time": 1.0})
    assert bad_kind.status_code == 422
    bad_field = client.post(
        "/events", json={"kind": "AttackDetected", "nf": "gnb", "time": 1.0, "bogus": 1}
    )
    assert bad_field.status_code == 422
    client.post("/sim/run", json={"until": 2.0})
    past = client.post("/events", json={"kind": "AttackDetected", "nf": "gnb", "time": 1.0})
    assert past.status_code == 422


def test_capacity_violation_maps_to_409(client):
    load(client)
    client.post(
        "/events",
        json={"kind": "UEAttached", "nf": "gnb", "ep": "cell", "time": 0.5, "count": 41},
    )
    resp = client.post("/sim/step", json={"count": 1})
    assert resp.status_code == 409
    assert resp.json()["error"] == "CapacityExceededError"


# -- intents


def test_intent_crud(client):
    load(client)
    created = client.post(
        "/intents", json={"id": "ran-floor", "scope": "domain", "scope_id": "d1", "threshold": 0.6}
    )
    assert created.status_code == 201
    assert created.json() == {
        "id": "ran-floor",
        "scope": "domain",
        "scope_id": "d1",
        "threshold": 0.6,
        "parent": None,
    }
    dup = client.post(
        "/intents", json={"id": "ran-floor", "scope": "domain", "scope_id": "d1", "threshold": 0.5}
    )
    assert dup.status_code == 422
    listed = client.get("/intents").json()["intents"]
    assert [i["id"] for i in listed] == ["floor", "ran-floor"]
    patched = client.patch("/intents/ran-floor", json={"threshold": 0.4})
    assert patched.json()["threshold"] == 0.4
    assert client.patch("/intents/ghost", json={"threshold": 0.4}).status_code == 404
    assert client.delete("/intents/ran-floor").json() == {"removed": "ran-floor"}
    assert client.delete("/intents/ran-floor").status_code == 404


def test_intent_scope_errors(client):
    load(client)
    unknown = client.post(
        "/intents", json={"id": "x", "scope": "domain", "scope_id": "ghost", "threshold": 0.5}
    )
    assert unknown.status_code == 404
    mismatch = client.post(
        "/intents", json={"id": "x", "scope": "domain", "scope_id": "gnb", "threshold": 0.5}
    )
    assert mismatch.status_code == 422
    bad_scope = client.post(
        "/intents", json={"id": "x", "scope": "galaxy", "threshold": 0.5}
    )
    assert bad_scope.status_code == 422  # rejected by the request schema


def test_intent_children_listing(client):
    load(client)
    listed = client.get("/intents", params={"children": "true"}).json()["intents"]
    ids = [i["id"] for i in listed]
    assert ids == ["floor", "floor:d1", "floor:d2"]
    assert all(i["parent"] == "floor" for i in listed[1:])
    assert listed[1]["scope"] == "domain" and listed[1]["scope_id"] == "d1"


# -- reports and log


def test_reports_cursor(client):
    doc = small_scenario(intents=[{"id": "high", "scope": "network", "threshold": 0.99}])
    load(client, doc)
    client.post("/sim/run", json={})
    first = client.get("/reports").json()
    # per tick: the network intent breaches, and so does its d1 child
    assert len(first["reports"]) == 10
    assert {r["intent"] for r in first["reports"]} == {"high", "high:d1"}
    report = first["reports"][0]
    assert report["intent"] == "high" and report["observed"] < 0.99
    assert report["shortfall"] == pytest.approx(0.99 - report["observed"])
    assert report["top_contributor"] in {"controls", "misconfig", "surface"}
    again = client.get("/reports", params={"since": first["cursor"]}).json()
    assert again["reports"] == []


def test_log_feed_filters(client):
    load(client)
    client.post("/sim/run", json={})
    everything = client.get("/log", params={"limit": 100000}).json()
    assert everything["records"][0]["type"] == "scenario"
    assert everything["cursor"] == everything["records"][-1]["seq"]
    snapshots = client.get("/log", params={"kinds": "snapshot", "limit": 5}).json()
    assert len(snapshots["records"]) == 5
    assert all(r["type"] == "snapshot" for r in snapshots["records"])
    # resuming from a cursor yields strictly later records
    tail = client.get("/log", params={"since": snapshots["cursor"]}).json()
    assert all(r["seq"] > snapshots["cursor"] for r in tail["records"])


# -- stepping


def test_step_and_run(client):
    load(client)
    stepped = client.post("/sim/step", json={"count": 2}).json()
    assert [r["kind"] for r in stepped["results"]] == ["tick", "tick"]
    assert stepped["clock"] == 2.0
    ran = client.post("/sim/run", json={"until": 4.0}).json()
    assert ran["until"] == 4.0 and ran["ticks"] == 2 and ran["clock"] == 4.0
    backwards = client.post("/sim/run", json={"until": 1.0})
    assert backwards.status_code == 422
    client.post("/sim/run", json={})  # to the horizon
    exhausted = client.post("/sim/step", json={"count": 1})
    assert exhausted.status_code == 409
    assert exhausted.json()["error"] == "ExhaustedScenarioError"


def test_run_body_is_optional(client):
    load(client)
    resp = client.post("/sim/run")
    assert resp.status_code == 200 and resp.json()["clock"] == 5.0


# -- read-only guarantees and restart


def test_get_endpoints_leave_state_untouched(client):
    load(client)
    client.post("/sim/run", json={"until": 2.0})
    digest = client.get("/state").json()["digest"]
    for url in (
        "/health",
        "/scenario",
        "/state",
        "/state?at=1.0",
        "/state/network",
        "/state/domain/d1",
        "/state/nf/gnb",
        "/fsm/table",
        "/fsm",
        "/fsm/gnb",
        "/events/pending",
        "/intents",
        "/intents?children=true",
        "/reports",
        "/log",
    ):
        assert client.get(url).status_code == 200, url
    assert client.get("/state").json()["digest"] == digest


def test_restart_replay_reproduces_history(client, tmp_path):
    log_path = str(tmp_path / "run.log")
    doc = small_scenario(
        events=[{"time": 1.5, "kind": "ConfigChanged", "nf": "gnb", "rule": "r1", "noncompliant_attributes": 2}]
    )
    load(client, doc, log_path=log_path)
    client.post("/sim/run", json={})
    final = client.get("/state").json()
    historical = client.get("/state?at=2.0").json()
    nf_view = client.get("/state/nf/gnb").json()

    fresh = TestClient(create_app())  # a restarted service process
    info = fresh.post("/scenario/replay", json={"path": log_path})
    assert info.status_code == 200
    assert info.json()["digest"] == final["digest"]
    assert fresh.get("/state").json() == final
    assert fresh.get("/state?at=2.0").json() == historical
    assert fresh.get("/state/nf/gnb").json() == nf_view


def test_replay_missing_file(client):
    resp = client.post("/scenario/replay", json={"path": "/nonexistent/run.log"})
    assert resp.status_code == 422
