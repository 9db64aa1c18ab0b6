import json
import re

import pytest
from fastapi.testclient import TestClient

from sceneagent.backends import BackendProfile, ScriptedTransport
from sceneagent.service import ServiceError, SessionManager, create_app

from authoring import DIGEST_RE, author_ask
from conftest import flat_frames, make_video

KF0_REPLY = json.dumps(
    {
        "caption": "a scalpel touches the tissue",
        "entities": [
            {"label": "scalpel", "bbox": [0, 0, 2, 2], "track_hint": "s1", "confidence": 1.0},
            {"label": "tissue", "bbox": [1, 1, 2, 2], "track_hint": None, "confidence": 0.9},
        ],
        "relations": [["scalpel", "contacts", "tissue"]],
    }
)

KF2_REPLY = json.dumps(
    {
        "caption": "forceps touch the tissue",
        "entities": [
            {"label": "forceps", "bbox": [0, 0, 2, 2], "track_hint": "f1", "confidence": 1.0},
            {"label": "tissue", "bbox": [1, 1, 2, 2], "track_hint": None, "confidence": 0.9},
        ],
        "relations": [["forceps", "contacts", "tissue"]],
    }
)

PAPER_QUERY = "MATCH (a:instrument)-[r:contacts]->(b:tissue_region) RETURN a LATEST"


def scripted_manager(tmp_path=None, store=None, budget=200):
    profile = BackendProfile(
        name="scripted", kind="scripted", model_id="scripted-default", fixture_path="inline"
    )
    transport = ScriptedTransport()
    manager = SessionManager(
        profile=profile, transport=transport, store_dir=store, call_budget=budget
    )
    return manager, transport


def make_test_video(tmp_path, video_id="vid"):
    # frames 0,1 quiet then a step change: keyframes are 0 (always) and 2
    # (motion + heartbeat at max_gap=2 for fps=1)
    return make_video(
        tmp_path, flat_frames([0, 0, 200, 200]), 4, 4, fps=1.0, video_id=video_id
    )


def drive(client_call, transport, replies, max_rounds=60):
    """Run an endpoint until its scripted fixtures exist.

    Every fixture miss surfaces the missing digest in the error payload; we
    attach the next scripted reply under that digest and retry.
    """
    queue = list(replies)
    for _ in range(max_rounds):
        response = client_call()
        if response.status_code != 502:
            return response
        message = response.json()["error"]["message"]
        match = DIGEST_RE.search(message)
        if not match:
            raise AssertionError(f"unexpected backend error: {message}")
        if not queue:
            raise AssertionError(f"fixture queue exhausted; next miss: {message[:200]}")
        transport.fixtures[match.group(1)] = {"text": queue.pop(0), "finish_reason": "stop"}
    raise AssertionError("fixture authoring did not converge")


@pytest.fixture
def service(tmp_path):
    manager, transport = scripted_manager()
    app = create_app(manager)
    return TestClient(app), manager, transport, make_test_video(tmp_path)


class TestHealthAndSessions:
    def test_health(self, service):
        client, *_ = service
        assert client.get("/v1/health").json() == {"status": "ok"}

    def test_create_session(self, service):
        client, _manager, _transport, manifest = service
        resp = client.post("/v1/sessions", json={"manifest_path": str(manifest)})
        assert resp.status_code == 201
        body = resp.json()
        assert body["video_id"] == "vid"
        assert body["keyframe_count"] == 2
        assert body["duration_s"] == 4.0

    def test_create_session_inline_manifest(self, service, tmp_path):
        client, *_ = service
        doc = json.loads((tmp_path / "manifest.json").read_text())
        resp = client.post(
            "/v1/sessions", json={"manifest": doc, "base_dir": str(tmp_path)}
        )
        assert resp.status_code == 201

    def test_distinct_session_ids(self, service):
        client, _m, _t, manifest = service
        first = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()
        second = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()
        assert first["session_id"] != second["session_id"]

    def test_bad_manifest_is_400(self, service, tmp_path):
        client, *_ = service
        broken = tmp_path / "broken.json"
        broken.write_text(json.dumps({"video_id": "v", "fps": 0, "frames": ["x.pgm"]}))
        resp = client.post("/v1/sessions", json={"manifest_path": str(broken)})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "bad_request"

    def test_unknown_session_is_404(self, service):
        client, *_ = service
        resp = client.post("/v1/sessions/nope/ask", json={"question": "?"})
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"


class TestAsk:
    def test_fixture_driven_answer_with_trace(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        author_ask(
            manager, transport, sid, "what is shown?",
            "Thought: clear\nFinal Answer: an operating table",
            ["an operating table"] * 3,
        )
        resp = client.post(f"/v1/sessions/{sid}/ask", json={"question": "what is shown?"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["answer"] == "an operating table"
        assert body["confidence"] == 1.0
        assert body["abstained"] is False
        trace = client.get(f"/v1/traces/{body['trace_ref']}")
        assert trace.status_code == 200
        assert trace.json()["answer"] == "an operating table"
        assert len(trace.json()["steps"]) == 1

    def test_budget_zero_is_429(self, tmp_path):
        manager, transport = scripted_manager(budget=0)
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path)
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/ask", json={"question": "?"})
        assert resp.status_code == 429
        assert resp.json()["error"]["code"] == "budget_exceeded"

    def test_unknown_trace_is_404(self, service):
        client, *_ = service
        assert client.get("/v1/traces/ghost.0").status_code == 404


class TestSceneGraph:
    def generate(self, client, transport, sid):
        return drive(
            lambda: client.post(f"/v1/sessions/{sid}/scenegraph"),
            transport,
            [KF0_REPLY, KF2_REPLY],
        )

    def test_graph_from_extractions(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        resp = self.generate(client, transport, sid)
        assert resp.status_code == 200
        body = resp.json()
        assert body["warnings"] == []
        node_ids = {n["id"] for n in body["graph"]["nodes"]}
        assert node_ids == {"scalpel:s1", "forceps:f1", "tissue_region:#0"}
        contacts = [e for e in body["graph"]["edges"] if e["relation"] == "contacts"]
        assert {(e["src"], e["t_start"]) for e in contacts} >= {
            ("scalpel:s1", 0),
            ("forceps:f1", 2),
        }

    def test_repeat_generation_is_idempotent(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        first = self.generate(client, transport, sid).json()
        spent_after_first = manager.get(sid).budget.spent
        second = client.post(f"/v1/sessions/{sid}/scenegraph").json()
        assert second == first
        assert manager.get(sid).budget.spent == spent_after_first  # cache absorbed the repeat

    def test_all_malformed_extractions_degrade_to_warnings(self, tmp_path):
        manager, transport = scripted_manager()
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path, video_id="garbled")
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        resp = drive(
            lambda: client.post(f"/v1/sessions/{sid}/scenegraph"),
            transport,
            ["nonsense one", "nonsense two", "nonsense three", "nonsense four"],
        )
        body = resp.json()
        assert body["graph"]["nodes"] == [] and body["graph"]["edges"] == []
        assert len(body["warnings"]) == 2  # one per keyframe
        assert all("unparsable extraction" in w for w in body["warnings"])


class TestGraphQuery:
    def test_query_before_generation_conflicts(self, service):
        client, _m, _t, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/graphql-query", json={"query": PAPER_QUERY})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "conflict"
        assert client.get(f"/v1/sessions/{sid}/graph").status_code == 409

    def test_syntax_error_forwards_offset(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        TestSceneGraph().generate(client, transport, sid)
        resp = client.post(
            f"/v1/sessions/{sid}/graphql-query", json={"query": "MATCH (a)-[r->(b) RETURN a"}
        )
        assert resp.status_code == 400
        error = resp.json()["error"]
        assert error["code"] == "bad_request"
        assert error["detail"]["offset"] == 13

    def test_paper_query_end_to_end(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        TestSceneGraph().generate(client, transport, sid)
        resp = client.post(f"/v1/sessions/{sid}/graphql-query", json={"query": PAPER_QUERY})
        assert resp.status_code == 200
        body = resp.json()
        assert body["rows"] == [{"a": "forceps:f1"}]
        assert len(body["trace"]["chosen_ids"]) == 1
        chosen = body["trace"]["chosen_ids"][0]
        graph = client.get(f"/v1/sessions/{sid}/graph").json()
        chosen_edge = next(e for e in graph["edges"] if e["id"] == chosen)
        assert chosen_edge["src"] == "forceps:f1"
        assert chosen_edge["t_end"] == 2


class TestInvariants:
    def test_reads_do_not_mutate_state(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        TestSceneGraph().generate(client, transport, sid)
        before = manager.state_digest(sid)
        client.get(f"/v1/sessions/{sid}/graph")
        client.get("/v1/health")
        client.post(f"/v1/sessions/{sid}/graphql-query", json={"query": PAPER_QUERY})
        assert manager.state_digest(sid) == before

    def test_budget_conservation_and_attribution(self, service):
        client, manager, transport, manifest = service
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        TestSceneGraph().generate(client, transport, sid)
        author_ask(
            manager, transport, sid, "what happened?",
            "Final Answer: surgery", ["surgery"] * 3,
        )
        resp = client.post(f"/v1/sessions/{sid}/ask", json={"question": "what happened?"})
        assert resp.status_code == 200
        session = manager.get(sid)
        call_log = session.context.client.call_log
        assert session.budget.spent == len(call_log)
        assert session.budget.spent <= session.budget.limit
        trace_calls = [
            digest
            for trace in session.traces.values()
            for step in trace["steps"]
            for digest in step["backend_calls"]
        ]
        # the ask's calls are attributed to exactly one trace step each and
        # were the last backend invocations; earlier entries are extractions
        assert len(trace_calls) == len(set(trace_calls)) == 4
        assert call_log[-4:] == trace_calls


class TestPersistence:
    def test_round_trip_restores_answers(self, tmp_path):
        store = tmp_path / "store"
        manager, transport = scripted_manager(store=store)
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path / "video")
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        drive(
            lambda: client.post(f"/v1/sessions/{sid}/scenegraph"),
            transport, [KF0_REPLY, KF2_REPLY],
        )
        drive(
            lambda: client.post(f"/v1/sessions/{sid}/ask", json={"question": "what is used?"}),
            transport,
            ["Final Answer: forceps", "forceps", "forceps", "forceps"],
        )
        before_query = client.post(
            f"/v1/sessions/{sid}/graphql-query", json={"query": PAPER_QUERY}
        ).json()
        before_digest = manager.state_digest(sid)

        manager2 = SessionManager(
            profile=manager.profile, transport=transport, store_dir=store
        )
        client2 = TestClient(create_app(manager2))
        after_query = client2.post(
            f"/v1/sessions/{sid}/graphql-query", json={"query": PAPER_QUERY}
        ).json()
        assert after_query == before_query
        assert manager2.state_digest(sid) == before_digest
        trace_refs = list(manager2.get(sid).traces)
        assert client2.get(f"/v1/traces/{trace_refs[0]}").status_code == 200

    def test_load_from_empty_dir(self, tmp_path):
        manager, _ = scripted_manager(store=tmp_path / "empty")
        assert manager.sessions == {}

    def test_corrupted_graph_file_names_path(self, tmp_path):
        store = tmp_path / "store"
        manager, transport = scripted_manager(store=store)
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path / "video")
        sid = client.post("/v1/sessions", json={"manifest_path": str(manifest)}).json()["session_id"]
        drive(lambda: client.post(f"/v1/sessions/{sid}/scenegraph"), transport, [KF0_REPLY, KF2_REPLY])
        graph_file = store / "sessions" / sid / "graph.json"
        graph_file.write_text("{corrupted")
        with pytest.raises(ServiceError) as err:
            SessionManager(profile=manager.profile, transport=transport, store_dir=store)
        assert str(graph_file) in str(err.value)


class TestStaticBearerToken:
    def test_token_gate_when_configured(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SCENEAGENT_SERVER_TOKEN", "sekrit")
        manager, _transport = scripted_manager()
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path)
        assert client.get("/v1/health").status_code == 200  # health stays open
        denied = client.post("/v1/sessions", json={"manifest_path": str(manifest)})
        assert denied.status_code == 401
        assert denied.json()["error"]["code"] == "bad_request"
        allowed = client.post(
            "/v1/sessions",
            json={"manifest_path": str(manifest)},
            headers={"Authorization": "Bearer sekrit"},
        )
        assert allowed.status_code == 201

    def test_no_token_means_open(self, tmp_path, monkeypatch):
        monkeypatch.delenv("SCENEAGENT_SERVER_TOKEN", raising=False)
        manager, _transport = scripted_manager()
        client = TestClient(create_app(manager))
        manifest = make_test_video(tmp_path)
        assert client.post("/v1/sessions", json={"manifest_path": str(manifest)}).status_code == 201
