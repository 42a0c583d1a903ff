"""Engine configuration: every tunable threshold in one place.

Values can be overridden from a JSON file whose keys mirror the field
names of :class:`EngineConfig`. Unknown keys are rejected so typos fail
loudly instead of silently keeping a default.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoFailure


@dataclass(frozen=True)
class EngineConfig:
    # embeddings
    embedding_backend: str = "reference-hash"
    embedding_dim: int = 64
    embedding_endpoint: str | None = None
    embedding_cache_path: str | None = None

    # quality model
    hidden_units: int = 16
    rating_threshold: float = 1.17
    training_seed: int = 0

    # replacement-word suggestions
    anchors: tuple[str, ...] = ("exercise", "physical activity")
    corpus_radius: float | None = None  # None: 75th pct of corpus pairwise distances
    anchor_radius: float = 1.2
    min_gain: float = 0.0
    min_neighbors: int = 10
    suggestion_top_k: int = 3

    # corpus bootstrap
    bootstrap_samples: int = 50

    # service limits
    max_text_chars: int = 2000

    # data locations (resolved by the service / CLI layer)
    model_path: str | None = None
    corpus_dir: str | None = None
    graph_path: str | None = None
    prompts_path: str | None = None

    def replace(self, **changes) -> "EngineConfig":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise IoFailure(f"cannot load config {path}: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise IoFailure(f"unknown config keys: {sorted(unknown)}")
        if "anchors" in data:
            data = dict(data)
            data["anchors"] = tuple(data["anchors"])
        return cls(**data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["anchors"] = list(self.anchors)
        return out
