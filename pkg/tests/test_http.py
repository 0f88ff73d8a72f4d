import json
from importlib import resources

import pytest
from fastapi.testclient import TestClient

from tokenscope.service.config import build_orchestrator
from tokenscope.service.http import create_app

QUERY = "Is Bitcoin a good investment right now?"


@pytest.fixture()
def client(tmp_path):
    config = json.loads(
        resources.files("tokenscope").joinpath("config/service.demo.json").read_text()
    )
    config["data_dir"] = str(tmp_path / "data")
    app = create_app(build_orchestrator(config))
    return TestClient(app)


def parse_sse(text):
    events = []
    for block in text.split("\n\n"):
        block = block.strip()
        if block.startswith("data: "):
            events.append(json.loads(block[len("data: ") :]))
    return events


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_tools_endpoint(client):
    doc = client.get("/api/tools").json()
    assert len(doc["tools"]) == 6
    assert doc["rendered"].count("### ") == 6


def test_session_lifecycle(client):
    session_id = client.post("/api/sessions").json()["session_id"]
    listing = client.get("/api/sessions").json()
    assert any(s["session_id"] == session_id for s in listing)
    transcript = client.get(f"/api/sessions/{session_id}").json()
    assert transcript["turns"] == []
    assert client.get("/api/sessions/missing").status_code == 404


def test_message_stream_end_to_end(client):
    session_id = client.post("/api/sessions").json()["session_id"]
    with client.stream(
        "POST", f"/api/sessions/{session_id}/messages", json={"text": QUERY}
    ) as response:
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/event-stream")
        body = "".join(response.iter_text())
    events = parse_sse(body)
    assert [e["seq"] for e in events] == list(range(len(events)))
    kinds = [e["kind"] for e in events]
    assert kinds.count("done") == 1
    assert len({e["payload"]["tool"] for e in events if e["kind"] == "tool_result"}) >= 3

    transcript = client.get(f"/api/sessions/{session_id}").json()
    assert transcript["turns"][0]["role"] == "user"
    assert transcript["turns"][-1]["role"] == "assistant"


def test_artifact_fetchable_by_reference(client):
    session_id = client.post("/api/sessions").json()["session_id"]
    with client.stream(
        "POST", f"/api/sessions/{session_id}/messages", json={"text": QUERY}
    ) as response:
        events = parse_sse("".join(response.iter_text()))
    results = [e for e in events if e["kind"] == "tool_result"]
    assert results
    ref = results[0]["payload"]["ref"]
    artifact = client.get(f"/api/sessions/{session_id}/artifacts/{ref}").json()
    assert artifact["tool"] == results[0]["payload"]["tool"]
    assert client.get(f"/api/sessions/{session_id}/artifacts/zzz").status_code == 404


def test_message_to_unknown_session_404(client):
    response = client.post("/api/sessions/zzz/messages", json={"text": "hi"})
    assert response.status_code == 404


def test_empty_message_422(client):
    session_id = client.post("/api/sessions").json()["session_id"]
    response = client.post(f"/api/sessions/{session_id}/messages", json={"text": "  "})
    assert response.status_code == 422
