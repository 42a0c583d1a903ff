"""Re-record conditions.json by driving the real service in-process.

One fresh engine per condition (temp corpus dir, bundled model/graph/
prompts, session seed 7) and the same three-revision script, so the only
thing that varies across fixtures is the condition gating. Session ids
are rewritten per condition so the offline mock can tell them apart.

Run from the repository root after installing the package:

    python frontend/fixtures/record_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from ideafeed.config import EngineConfig
from ideafeed.corpus import CONDITIONS
from ideafeed.runtime import build_engine
from ideafeed.service import create_app

SEED = 7

TEXTS = [
    "evening walk with the dog around the park",
    "brisk morning jog with the dog around the lake",
    "brisk morning jog with the friendly dog around the misty lake",
]


def record_condition(condition: str) -> dict:
    with tempfile.TemporaryDirectory() as tmp:
        engine = build_engine(EngineConfig(), corpus_dir=tmp)
        client = TestClient(create_app(engine))
        res = client.post("/sessions", json={"condition": condition, "seed": SEED})
        res.raise_for_status()
        session = res.json()
        entries = []
        for iteration, text in enumerate(TEXTS, start=1):
            res = client.post(
                f"/sessions/{session['session_id']}/ideations",
                json={
                    "prompt_id": session["first_prompt"]["id"],
                    "text": text,
                    "iteration": iteration,
                },
            )
            res.raise_for_status()
            entries.append(res.json())
        return {"session": session, "entries": entries}


def main() -> None:
    fixtures = {}
    for condition in CONDITIONS:
        data = record_condition(condition)
        # fresh engines all hand out s0001; make ids unique per condition
        blob = json.dumps(data).replace("s0001", f"s-{condition.lower()}")
        fixtures[condition] = json.loads(blob)
    out = Path(__file__).with_name("conditions.json")
    out.write_text(json.dumps(fixtures, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
