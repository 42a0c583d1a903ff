"""Shared fixtures: deterministic embedder, fixture corpora, bundled assets."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from ideafeed.config import EngineConfig
from ideafeed.corpus import CorpusEntry, CorpusSnapshot, CorpusStore
from ideafeed.embedding import Embedder, EmbedderConfig, EmbeddingVector
from ideafeed.kg import KnowledgeGraph
from ideafeed.quality import QualityModel
from ideafeed.runtime import build_engine, data_path
from ideafeed.scoring import Scorer

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# 100 words whose hash slots at D=64 are pairwise distinct, chosen by
# enumeration so the no-collision embedding check is exact.
VOCAB_100 = [
    "walk", "run", "jog", "swim", "bike", "hike", "dance", "stretch", "climb", "lift",
    "jump", "skip", "row", "paddle", "ski", "skate", "sprint", "lunge", "squat", "plank",
    "pushup", "situp", "pilates", "zumba", "cardio", "sweat", "train", "gym", "park", "trail",
    "beach", "hill", "stairs", "track", "field", "court", "pool", "lake", "river", "mountain",
    "yard", "morning", "noon", "today", "tomorrow", "weekly", "minute", "moment", "season", "spring",
    "summer", "friend", "partner", "family", "team", "trainer", "neighbor", "puppy", "music", "song",
    "rhythm", "beat", "podcast", "energy", "posture", "muscle", "legs", "arms", "shoulders", "core",
    "mind", "calm", "smile", "laugh", "streak", "progress", "reward", "adventure", "active", "bright",
    "quick", "steady", "gentle", "water", "rest", "office", "work", "moon", "light", "path",
    "store", "shop", "studio", "class", "routine", "cooldown", "hat", "towel", "band", "hoop",
]


def unit(vec) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64)
    return arr / np.linalg.norm(arr)


def snapshot_from_vectors(vectors, condition: str = "SAXC", version: int = 1) -> CorpusSnapshot:
    """A corpus snapshot with hand-placed unit vectors."""
    entries = tuple(
        CorpusEntry(f"v{i}", f"point {i}", EmbeddingVector(unit(v)))
        for i, v in enumerate(vectors)
    )
    return CorpusSnapshot(condition, entries, version)


def snapshot_from_texts(texts, embedder: Embedder, condition: str = "SAXC", version: int = 1) -> CorpusSnapshot:
    entries = tuple(
        CorpusEntry(f"t{i}", text, embedder.embed(text)) for i, text in enumerate(texts)
    )
    return CorpusSnapshot(condition, entries, version)


@pytest.fixture(scope="session")
def embedder() -> Embedder:
    return Embedder(EmbedderConfig(backend="reference-hash", dimension=64))


@pytest.fixture(scope="session")
def fixture_messages() -> list[str]:
    lines = (FIXTURES / "messages50.txt").read_text("utf-8").splitlines()
    msgs = [ln.strip() for ln in lines if ln.strip()]
    assert len(msgs) == 50
    return msgs


@pytest.fixture(scope="session")
def fixture_corpus(fixture_messages, embedder) -> CorpusSnapshot:
    """12-message corpus used for golden scoring and bootstrap files."""
    return snapshot_from_texts(fixture_messages[:12], embedder)


@pytest.fixture(scope="session")
def bundled_model() -> QualityModel:
    return QualityModel.load(data_path("quality_model.json"))


@pytest.fixture(scope="session")
def bundled_graph() -> KnowledgeGraph:
    graph, _ = KnowledgeGraph.ingest(data_path("graph.tsv"))
    return graph


@pytest.fixture(scope="session")
def seed_corpus(embedder) -> CorpusSnapshot:
    """The bundled 50-message seed corpus, as the engine loads it."""
    lines = Path(data_path("seed_messages.txt")).read_text("utf-8").splitlines()
    texts = [ln.strip() for ln in lines if ln.strip()][:50]
    return snapshot_from_texts(texts, embedder)


@pytest.fixture(scope="session")
def scorer(bundled_model, seed_corpus, embedder) -> Scorer:
    return Scorer(bundled_model, seed_corpus, embedder)


@pytest.fixture()
def engine(tmp_path):
    return build_engine(EngineConfig(), corpus_dir=tmp_path / "corpora")


@pytest.fixture()
def store(tmp_path, embedder) -> CorpusStore:
    return CorpusStore(tmp_path / "corpora", embedder)
