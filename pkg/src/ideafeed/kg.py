"""Term-relation knowledge graph: TSV ingestion, filtered neighbor queries,
and an optional live edge-lookup client with a persistent local snapshot.

Edge file format (UTF-8): ``relation<TAB>start_term<TAB>end_term<TAB>weight``,
one edge per line, lowercase terms, ``#``-prefixed comment lines ignored.
Malformed lines are counted and skipped.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AllLinesMalformed, IoFailure, NetworkFailure

# Relations that rarely make actionable replacement words. Graph queries
# exclude these by default.
DEFAULT_EXCLUDED_RELATIONS = frozenset(
    {
        "Synonym",
        "Antonym",
        "DerivedFrom",
        "SymbolOf",
        "DefinedAs",
        "MannerOf",
        "EtymologicallyRelatedTo",
        "EtymologicallyDerivedFrom",
        "ExternalURL",
    }
)


@dataclass(frozen=True, order=True)
class KnowledgeEdge:
    relation: str
    start_term: str
    end_term: str
    weight: float


@dataclass(frozen=True)
class RelationFilter:
    excluded: frozenset[str] = DEFAULT_EXCLUDED_RELATIONS

    def allows(self, relation: str) -> bool:
        return relation not in self.excluded


@dataclass
class IngestStats:
    edges: int = 0
    malformed: int = 0
    comments: int = 0


def _parse_line(line: str) -> KnowledgeEdge | None:
    parts = line.split("\t")
    if len(parts) != 4:
        return None
    relation, start, end, weight_s = (p.strip() for p in parts)
    if not relation or not start or not end:
        return None
    try:
        weight = float(weight_s)
    except ValueError:
        return None
    if weight < 0 or weight != weight:
        return None
    return KnowledgeEdge(relation, start.lower(), end.lower(), weight)


class KnowledgeGraph:
    """Immutable adjacency index over a set of edges."""

    def __init__(self, edges: list[KnowledgeEdge]):
        self.edges = tuple(sorted(set(edges)))
        adj: dict[str, list[tuple[str, str, float]]] = {}
        for e in self.edges:
            adj.setdefault(e.start_term, []).append((e.end_term, e.relation, e.weight))
            adj.setdefault(e.end_term, []).append((e.start_term, e.relation, e.weight))
        self._adjacency = adj

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def ingest(cls, path: str | Path) -> tuple["KnowledgeGraph", IngestStats]:
        stats = IngestStats()
        edges: list[KnowledgeEdge] = []
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise IoFailure(f"cannot read edge file {path}: {exc}") from exc
        data_lines = 0
        for line in lines:
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                stats.comments += 1
                continue
            data_lines += 1
            edge = _parse_line(line)
            if edge is None:
                stats.malformed += 1
            else:
                edges.append(edge)
        if data_lines > 0 and not edges:
            raise AllLinesMalformed(f"no parseable edges in {path} ({stats.malformed} malformed)")
        stats.edges = len(edges)
        return cls(edges), stats

    def export(self, path: str | Path) -> None:
        """Write the graph back out in sorted, canonical TSV form."""
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.edges:
                fh.write(f"{e.relation}\t{e.start_term}\t{e.end_term}\t{e.weight:g}\n")

    def with_edges(self, extra: list[KnowledgeEdge]) -> "KnowledgeGraph":
        return KnowledgeGraph(list(self.edges) + extra)

    def related_words(
        self, term: str, relation_filter: RelationFilter | None = None
    ) -> list[tuple[str, str, float]]:
        """Neighbors of ``term`` in either edge direction, relation-filtered.

        Deduplicated by neighbor term keeping the max-weight edge (ties
        resolved to the lexicographically smallest relation), sorted by
        (-weight, term). Unknown terms yield an empty list.
        """
        relation_filter = relation_filter or RelationFilter()
        best: dict[str, tuple[float, str]] = {}
        for other, relation, weight in self._adjacency.get(term.lower(), ()):
            if not relation_filter.allows(relation):
                continue
            cur = best.get(other)
            if cur is None or weight > cur[0] or (weight == cur[0] and relation < cur[1]):
                best[other] = (weight, relation)
        out = [(term_, rel, w) for term_, (w, rel) in best.items()]
        out.sort(key=lambda t: (-t[2], t[0]))
        return out


class RemoteEdgeClient:
    """Live edge-lookup client with an offline-first local snapshot.

    Remote shape: ``GET {endpoint}/c/en/{term}`` returning
    ``{"edges": [{"rel": {"label": ...}, "start": {"label": ...},
    "end": {"label": ...}, "weight": ...}, ...]}``. Every fetched edge is
    persisted to the snapshot TSV so subsequent runs need no network. A
    fixed delay is slept before each network call to respect rate limits.
    """

    def __init__(self, endpoint: str, snapshot_path: str | Path, delay: float = 1.0):
        self.endpoint = endpoint.rstrip("/")
        self.snapshot_path = Path(snapshot_path)
        self.delay = delay
        self._lock = threading.Lock()
        if self.snapshot_path.exists():
            self._graph, _ = KnowledgeGraph.ingest(self.snapshot_path)
        else:
            self._graph = KnowledgeGraph([])

    @property
    def graph(self) -> KnowledgeGraph:
        return self._graph

    def fetch(self, term: str) -> list[KnowledgeEdge]:
        """Edges touching ``term``, from the snapshot when possible."""
        term = term.lower()
        cached = [e for e in self._graph.edges if term in (e.start_term, e.end_term)]
        if cached:
            return cached
        edges = self._fetch_remote(term)
        with self._lock:
            self._graph = self._graph.with_edges(edges)
            self._graph.export(self.snapshot_path)
        return edges

    def _fetch_remote(self, term: str) -> list[KnowledgeEdge]:
        import httpx

        url = f"{self.endpoint}/c/en/{term.replace(' ', '_')}"
        time.sleep(self.delay)
        try:
            resp = httpx.get(url, timeout=30.0)
            resp.raise_for_status()
            body = resp.json()
        except Exception as exc:
            raise NetworkFailure(f"edge lookup at {url} failed: {exc}") from exc
        edges = []
        for raw in body.get("edges", []):
            try:
                edge = KnowledgeEdge(
                    relation=str(raw["rel"]["label"]),
                    start_term=str(raw["start"]["label"]).lower(),
                    end_term=str(raw["end"]["label"]).lower(),
                    weight=float(raw.get("weight", 1.0)),
                )
            except (KeyError, TypeError, ValueError):
                continue
            edges.append(edge)
        return edges
