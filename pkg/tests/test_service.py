"""HTTP API tests over an in-process test client."""

import pytest
from fastapi.testclient import TestClient

from ideafeed.service import create_app


@pytest.fixture()
def client(engine):
    return TestClient(create_app(engine))


def open_session(client, condition="SAXC", seed=1):
    resp = client.post("/sessions", json={"condition": condition, "seed": seed})
    assert resp.status_code == 200
    return resp.json()


def submit(client, sess, text, iteration=1, prompt_id=None):
    return client.post(
        f"/sessions/{sess['session_id']}/ideations",
        json={
            "prompt_id": prompt_id or sess["first_prompt"]["id"],
            "text": text,
            "iteration": iteration,
        },
    )


# -- session creation --------------------------------------------------------


def test_create_session_returns_first_prompt(client):
    body = open_session(client, "SA")
    assert set(body) == {"session_id", "condition", "first_prompt"}
    assert body["condition"] == "SA"
    assert set(body["first_prompt"]) == {"id", "text"}
    assert body["first_prompt"]["text"]


def test_create_session_seed_controls_the_draw(client):
    a = open_session(client, "S", seed=5)
    b = open_session(client, "S", seed=5)
    c = open_session(client, "S", seed=6)
    assert a["first_prompt"] == b["first_prompt"]
    assert a["session_id"] != b["session_id"]
    assert c["first_prompt"] != a["first_prompt"]


def test_create_session_unknown_condition_is_400(client):
    resp = client.post("/sessions", json={"condition": "ALL"})
    assert resp.status_code == 400
    assert "condition" in resp.json()["detail"]


# -- submission and feedback -------------------------------------------------


def test_submit_returns_full_feedback(client):
    sess = open_session(client, "SAXC")
    resp = submit(client, sess, "Take a short walk after dinner tonight.")
    assert resp.status_code == 200
    body = resp.json()
    assert set(body) == {"record", "payload", "default_view", "next_prompt"}
    assert body["default_view"] == "attribution"
    record = body["record"]
    assert record["iteration"] == 1
    assert "parent" not in record  # None fields are dropped
    assert set(body["payload"]) == {"scores", "score_kind", "highlights", "edits", "suggestions"}
    assert body["payload"]["edits"] == []
    scores = body["payload"]["scores"]
    assert set(scores) == {"quality_pct", "diversity_pct", "diversity_raw", "degenerate_embedding"}
    assert body["next_prompt"] == sess["first_prompt"]  # same prompt until iteration 3


def test_second_iteration_links_parent_and_defaults_contrastive(client):
    sess = open_session(client, "SAX")
    first = submit(client, sess, "Take a short walk after dinner tonight.").json()
    resp = submit(client, sess, "Take a short swim after dinner tonight.", iteration=2)
    body = resp.json()
    assert body["record"]["parent"] == first["record"]["id"]
    assert body["default_view"] == "contrastive"
    kinds = {e["kind"] for e in body["payload"]["edits"]}
    assert kinds == {"insertion", "deletion"}
    for e in body["payload"]["edits"]:
        assert set(e) == {"kind", "token", "benefit"}


def test_condition_n_payload_is_empty_object(client):
    sess = open_session(client, "N")
    body = submit(client, sess, "Dance in the kitchen for one song.").json()
    assert body["payload"] == {}
    assert body["default_view"] == "scores"


def test_feedback_can_be_refetched_with_other_score_kind(client):
    sess = open_session(client, "SA")
    body = submit(client, sess, "Jog around the block before work.").json()
    sid, iid = sess["session_id"], body["record"]["id"]
    resp = client.get(f"/sessions/{sid}/ideations/{iid}/feedback")
    assert resp.status_code == 200
    assert resp.json()["payload"]["score_kind"] == "diversity"  # the default
    quality = client.get(f"/sessions/{sid}/ideations/{iid}/feedback", params={"score": "quality"})
    assert quality.json()["payload"]["score_kind"] == "quality"
    bad = client.get(f"/sessions/{sid}/ideations/{iid}/feedback", params={"score": "zen"})
    assert bad.status_code == 400


def test_feedback_compare_parameter(client):
    sess = open_session(client, "SAX")
    submit(client, sess, "Take a short walk after dinner tonight.")
    second = submit(client, sess, "Take a short hike after dinner tonight.", iteration=2).json()
    sid, iid = sess["session_id"], second["record"]["id"]
    ok = client.get(f"/sessions/{sid}/ideations/{iid}/feedback", params={"compare": 1})
    assert ok.status_code == 200
    assert ok.json()["payload"]["edits"]
    out_of_range = client.get(f"/sessions/{sid}/ideations/{iid}/feedback", params={"compare": 2})
    assert out_of_range.status_code == 403


def test_compare_forbidden_without_contrastive_condition(client):
    sess = open_session(client, "SA")
    submit(client, sess, "Take a short walk after dinner tonight.")
    second = submit(client, sess, "Take a short hike after dinner tonight.", iteration=2).json()
    sid, iid = sess["session_id"], second["record"]["id"]
    resp = client.get(f"/sessions/{sid}/ideations/{iid}/feedback", params={"compare": 1})
    assert resp.status_code == 403


# -- error mapping -----------------------------------------------------------


def test_unknown_session_and_record_are_404(client):
    resp = client.post(
        "/sessions/ghost/ideations",
        json={"prompt_id": "p001", "text": "hi there", "iteration": 1},
    )
    assert resp.status_code == 404
    sess = open_session(client, "S")
    resp = client.get(f"/sessions/{sess['session_id']}/ideations/ghost/feedback")
    assert resp.status_code == 404


def test_wrong_iteration_and_prompt_are_409(client):
    sess = open_session(client, "S")
    assert submit(client, sess, "walk the dog", iteration=2).status_code == 409
    assert submit(client, sess, "walk the dog", prompt_id="p999").status_code == 409


def test_oversized_text_is_413(client):
    sess = open_session(client, "S")
    assert submit(client, sess, "stretch " * 400).status_code == 413


def test_schema_violations_are_422(client):
    sess = open_session(client, "S")
    sid = sess["session_id"]
    no_text = client.post(
        f"/sessions/{sid}/ideations",
        json={"prompt_id": sess["first_prompt"]["id"], "iteration": 1},
    )
    assert no_text.status_code == 422
    empty_text = submit(client, sess, "")
    assert empty_text.status_code == 422
    bad_iter = submit(client, sess, "walk", iteration=7)
    assert bad_iter.status_code == 422


# -- health and middleware ---------------------------------------------------


def test_health_reports_versions_and_model_hash(client, engine):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["model_hash"] == engine.model.train_hash
    assert set(body["corpus_versions"]) == {"N", "S", "SA", "SAX", "SAC", "SAXC"}
    assert all(v == 1 for v in body["corpus_versions"].values())

    sess = open_session(client, "SAC")
    for i, text in enumerate(
        ["Walk at noon.", "Walk at dawn instead.", "Walk at dusk with music."], start=1
    ):
        assert submit(client, sess, text, iteration=i).status_code == 200
    assert client.get("/health").json()["corpus_versions"]["SAC"] == 2


def test_cors_allows_browser_clients(client):
    resp = client.get("/health", headers={"Origin": "http://localhost:5173"})
    assert resp.headers.get("access-control-allow-origin") == "*"


def test_exhausted_session_omits_next_prompt(tmp_path, embedder):
    from ideafeed.config import EngineConfig
    from ideafeed.runtime import build_engine

    prompts = tmp_path / "prompts.txt"
    prompts.write_text("the only prompt\n", encoding="utf-8")
    engine = build_engine(EngineConfig(prompts_path=str(prompts)), corpus_dir=tmp_path / "c")
    client = TestClient(create_app(engine))
    sess = open_session(client, "S")
    for i, text in enumerate(["Run a mile.", "Run two miles.", "Run three miles."], start=1):
        body = submit(client, sess, text, iteration=i).json()
    assert "next_prompt" not in body
    one_more = submit(client, sess, "Run again.", iteration=1)
    assert one_more.status_code == 409
