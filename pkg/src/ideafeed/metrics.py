"""Corpus-level diversity metrics over unit-vector point sets.

All distances are angular (radians, in [0, pi]). The minimum spanning tree
is computed with Kruskal's algorithm; edges are processed in the order
(weight, lower node index, higher node index) so tied weights — duplicate
messages produce zero-weight edges — resolve identically on every run.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .embedding import Embedder, clamped_arccos, pairwise_angular
from .errors import EmptySet, TooFewPoints

METRICS = ("dispersion_sum", "dispersion_mean", "disparity", "repeller_chamfer")


@dataclass(frozen=True)
class BootstrapStats:
    n_samples: int
    mean: float
    stderr: float
    seed: int


@dataclass(frozen=True)
class MetricReport:
    metric: str
    value: float
    n_points: int
    bootstrap: BootstrapStats | None = None


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _as_matrix(points: np.ndarray) -> np.ndarray:
    mat = np.asarray(points, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("points must be a 2-D array of row vectors")
    return mat


def sorted_edges(points: np.ndarray) -> list[tuple[float, int, int]]:
    """All complete-graph edges (weight, i, j) with i < j, pre-sorted."""
    mat = _as_matrix(points)
    n = mat.shape[0]
    dist = pairwise_angular(mat)
    edges = [(float(dist[i, j]), i, j) for i in range(n) for j in range(i + 1, n)]
    edges.sort()
    return edges


def _kruskal_sum(n: int, edges) -> float:
    uf = _UnionFind(n)
    total = 0.0
    remaining = n - 1
    for w, i, j in edges:
        if uf.union(i, j):
            total += w
            remaining -= 1
            if remaining == 0:
                break
    return total


def mst_sum(points: np.ndarray) -> float:
    mat = _as_matrix(points)
    if mat.shape[0] < 2:
        raise TooFewPoints("MST needs at least 2 points")
    return _kruskal_sum(mat.shape[0], sorted_edges(mat))


def dispersion(points: np.ndarray) -> tuple[float, float]:
    """MST edge-weight sum and mean over the complete angular-distance graph."""
    mat = _as_matrix(points)
    total = mst_sum(mat)
    return total, total / (mat.shape[0] - 1)


def disparity(points: np.ndarray) -> float:
    """Mean pairwise angular distance over all n(n-1)/2 pairs."""
    mat = _as_matrix(points)
    n = mat.shape[0]
    if n < 2:
        raise TooFewPoints("disparity needs at least 2 points")
    dist = pairwise_angular(mat)
    iu = np.triu_indices(n, k=1)
    return float(np.mean(dist[iu]))


def repeller_chamfer(new_points: np.ndarray, prior_points: np.ndarray) -> float:
    """Mean over the new points of their minimum distance to any prior point."""
    new_mat = _as_matrix(new_points)
    prior_mat = _as_matrix(prior_points)
    if new_mat.shape[0] == 0 or prior_mat.shape[0] == 0:
        raise EmptySet("repeller_chamfer needs both point sets non-empty")
    cross = clamped_arccos(new_mat @ prior_mat.T)
    return float(np.mean(cross.min(axis=1)))


class MstIndex:
    """Pre-sorted edge list of a fixed point set, for fast one-point deltas.

    ``sum_with(v)`` returns the MST sum of the point set plus one extra
    point without re-sorting the base edges.
    """

    def __init__(self, points: np.ndarray):
        self.points = _as_matrix(points)
        self.n = self.points.shape[0]
        self.edges = sorted_edges(self.points)
        self.base_sum = _kruskal_sum(self.n, self.edges) if self.n >= 2 else 0.0

    def sum_with(self, vector: np.ndarray) -> float:
        vec = np.asarray(vector, dtype=np.float64)
        dist = clamped_arccos(self.points @ vec)
        new_edges = sorted((float(dist[k]), k, self.n) for k in range(self.n))
        merged = heapq.merge(self.edges, new_edges)
        return _kruskal_sum(self.n + 1, merged)


def compute_metric(metric: str, points: np.ndarray, prior: np.ndarray | None = None) -> float:
    if metric == "dispersion_sum":
        return dispersion(points)[0]
    if metric == "dispersion_mean":
        return dispersion(points)[1]
    if metric == "disparity":
        return disparity(points)
    if metric == "repeller_chamfer":
        if prior is None:
            raise ValueError("repeller_chamfer needs a prior point set")
        return repeller_chamfer(points, prior)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def bootstrap_metric(
    metric: str,
    texts: list[str],
    embedder: Embedder,
    prior_texts: list[str] | None = None,
    n_samples: int = 50,
    sample_size: int | None = None,
    seed: int = 0,
) -> MetricReport:
    """Seeded bootstrap of a diversity metric over ideation texts.

    Texts (not embeddings) are resampled with replacement — that is how a
    growing corpus actually varies — then embedded per sample. Sample size
    defaults to the corpus size. stderr is the sample standard deviation
    (n-1 denominator) of the per-sample statistics; a single sample reports
    stderr 0.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    size = sample_size if sample_size is not None else len(texts)
    memo = {t: e.values for t, e in zip(texts, embedder.embed_many(list(texts)))}
    prior_mat = None
    if prior_texts is not None:
        prior_mat = np.vstack([e.values for e in embedder.embed_many(list(prior_texts))])
    full_mat = np.vstack([memo[t] for t in texts])
    value = compute_metric(metric, full_mat, prior_mat)

    rng = np.random.default_rng(seed)
    stats = np.empty(n_samples, dtype=np.float64)
    for s in range(n_samples):
        idx = rng.integers(0, len(texts), size=size)
        sample_mat = np.vstack([memo[texts[i]] for i in idx])
        stats[s] = compute_metric(metric, sample_mat, prior_mat)
    stderr = float(np.std(stats, ddof=1)) if n_samples > 1 else 0.0
    return MetricReport(
        metric=metric,
        value=value,
        n_points=len(texts),
        bootstrap=BootstrapStats(n_samples=n_samples, mean=float(np.mean(stats)), stderr=stderr, seed=seed),
    )
