"""Per-condition prior-ideation collections with append-only persistence.

Each feedback condition keeps its own corpus so collections never
cross-contaminate. Storage is one JSONL file per condition plus a small
index file of convenience stats; the JSONL is the source of truth, so
reloading after a crash reconstructs the exact latest snapshot. Snapshot
version is 1 after initialization and increments by one per appended
ideation (seed rows are written with iteration 0 and do not count).
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

import numpy as np

from .embedding import Embedder, EmbeddingVector
from .errors import ConditionMismatch, IoFailure, TooFewSeeds
from .metrics import MstIndex
from .session import IdeationRecord

CONDITIONS = ("N", "S", "SA", "SAX", "SAC", "SAXC")


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    text: str
    embedding: EmbeddingVector


class CorpusSnapshot:
    """Immutable view of one condition's corpus at a fixed version.

    Geometry caches (stacked matrix, MST index, pairwise percentile) are
    computed lazily and shared by concurrent readers.
    """

    def __init__(self, condition: str, entries: tuple[CorpusEntry, ...], version: int):
        self.condition = condition
        self.entries = entries
        self.version = version

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def matrix(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, 0))
        return np.vstack([e.embedding.values for e in self.entries])

    @cached_property
    def mst_index(self) -> MstIndex:
        return MstIndex(self.matrix)

    @cached_property
    def texts(self) -> tuple[str, ...]:
        return tuple(e.text for e in self.entries)

    def pairwise_percentile(self, q: float = 75.0) -> float:
        """Percentile of prior-corpus pairwise distances (linear interpolation)."""
        from .embedding import pairwise_angular

        n = len(self.entries)
        if n < 2:
            return float("nan")
        dist = pairwise_angular(self.matrix)
        iu = np.triu_indices(n, k=1)
        return float(np.percentile(dist[iu], q))


def _record_row(rec: IdeationRecord, condition: str) -> dict:
    quality = rec.scores.quality_pct if rec.scores else None
    diversity = rec.scores.diversity_pct if rec.scores else None
    return {
        "id": rec.id,
        "text": rec.text,
        "condition": condition,
        "iteration": rec.iteration,
        "parent": rec.parent,
        "quality_pct": quality,
        "diversity_pct": diversity,
        "ts": datetime.now(timezone.utc).isoformat(),
    }


class CorpusStore:
    """Disk-backed corpora, one JSONL per condition, single writer each."""

    def __init__(self, root: str | Path, embedder: Embedder):
        self.root = Path(root)
        self.embedder = embedder
        self._locks = {c: threading.Lock() for c in CONDITIONS}
        self._snapshots: dict[str, CorpusSnapshot] = {}

    def _file(self, condition: str) -> Path:
        return self.root / f"corpus_{condition}.jsonl"

    def _index_file(self) -> Path:
        return self.root / "corpus_index.json"

    def init_corpus(
        self, condition: str, seed_file: str | Path, n: int = 50, seed: int | None = None
    ) -> CorpusSnapshot:
        """Seed a condition's corpus with n messages from a one-per-line file.

        With ``seed=None`` the first n messages are taken; otherwise a seeded
        draw without replacement. Re-initializing overwrites the condition's
        store.
        """
        _check_condition(condition)
        if n <= 0:
            raise ValueError("n must be positive")
        try:
            with open(seed_file, "r", encoding="utf-8") as fh:
                messages = [line.strip() for line in fh if line.strip()]
        except OSError as exc:
            raise IoFailure(f"cannot read seed file {seed_file}: {exc}") from exc
        if len(messages) < n:
            raise TooFewSeeds(f"seed file has {len(messages)} messages, need {n}")
        if seed is None:
            chosen = messages[:n]
        else:
            chosen = random.Random(seed).sample(messages, n)

        with self._locks[condition]:
            self.root.mkdir(parents=True, exist_ok=True)
            ts = datetime.now(timezone.utc).isoformat()
            with self._file(condition).open("w", encoding="utf-8") as fh:
                for i, text in enumerate(chosen):
                    row = {
                        "id": f"{condition}-seed-{i:04d}",
                        "text": text,
                        "condition": condition,
                        "iteration": 0,
                        "parent": None,
                        "quality_pct": None,
                        "diversity_pct": None,
                        "ts": ts,
                    }
                    fh.write(json.dumps(row) + "\n")
            self._snapshots.pop(condition, None)
            snap = self._load_locked(condition)
            self._write_index()
            return snap

    def has_corpus(self, condition: str) -> bool:
        _check_condition(condition)
        return self._file(condition).exists()

    def snapshot(self, condition: str) -> CorpusSnapshot:
        _check_condition(condition)
        with self._locks[condition]:
            if condition not in self._snapshots:
                self._snapshots[condition] = self._load_locked(condition)
            return self._snapshots[condition]

    def append_ideation(self, condition: str, record: IdeationRecord) -> CorpusSnapshot:
        """Append a final (submitted) ideation; other conditions untouched."""
        _check_condition(condition)
        if record.condition != condition:
            raise ConditionMismatch(f"record is for {record.condition!r}, store is {condition!r}")
        with self._locks[condition]:
            old = self._snapshots.get(condition) or self._load_locked(condition)
            with self._file(condition).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(_record_row(record, condition)) + "\n")
            entry = CorpusEntry(record.id, record.text, self.embedder.embed(record.text))
            snap = CorpusSnapshot(condition, old.entries + (entry,), old.version + 1)
            self._snapshots[condition] = snap
            self._write_index()
            return snap

    def versions(self) -> dict[str, int]:
        out = {}
        for cond in CONDITIONS:
            if self._file(cond).exists():
                out[cond] = self.snapshot(cond).version
        return out

    def _load_locked(self, condition: str) -> CorpusSnapshot:
        path = self._file(condition)
        if not path.exists():
            return CorpusSnapshot(condition, (), 0)
        entries: list[CorpusEntry] = []
        appended = 0
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                if row["iteration"] >= 1:
                    appended += 1
                entries.append(CorpusEntry(row["id"], row["text"], self.embedder.embed(row["text"])))
        return CorpusSnapshot(condition, tuple(entries), 1 + appended)

    def _write_index(self) -> None:
        stats = {}
        for cond in CONDITIONS:
            snap = self._snapshots.get(cond)
            if snap is not None:
                stats[cond] = {"version": snap.version, "entries": len(snap)}
        with self._index_file().open("w", encoding="utf-8") as fh:
            json.dump({"conditions": stats}, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _check_condition(condition: str) -> None:
    if condition not in CONDITIONS:
        raise ConditionMismatch(f"unknown condition {condition!r}; expected one of {CONDITIONS}")
