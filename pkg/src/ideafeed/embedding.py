"""Message and word embeddings on the unit hypersphere.

Two backends sit behind one config:

* ``reference-hash`` — signed feature hashing. Each content token is hashed
  with 64-bit BLAKE2b (``person=b"ifd-index"``) to an index in ``[0, D)`` and
  with a second BLAKE2b (``person=b"ifd-sign"``) to a sign bit; the resulting
  signed basis vectors are summed over the token multiset and L2-normalized.
  Fully deterministic and offline, which is what the test suite runs on.
* ``external-service`` — HTTP POST ``{endpoint}/embed`` with body
  ``{"texts": [...]}``, expecting ``{"vectors": [[...], ...], "dim": int}``.
  Responses are cached in an append-only JSONL file keyed by
  ``(backend-id, text)`` so reruns are offline.

Texts whose content tokens vanish (blank, punctuation-only, or all stop
words) embed to a flagged fallback basis vector ``e_1`` instead of raising,
so ablating the only word of a message still yields a defined score.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, EmbeddingUnavailable
from .textproc import tokenize

NORM_TOLERANCE = 1e-9

_HASH_INDEX_PERSON = b"ifd-index"
_HASH_SIGN_PERSON = b"ifd-sign"


@dataclass(frozen=True)
class EmbeddingVector:
    """A unit-norm vector, with a flag for degenerate (fallback) inputs."""

    values: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class EmbedderConfig:
    backend: str = "reference-hash"
    dimension: int = 64
    service_endpoint: str | None = None
    cache_path: str | None = None

    def __post_init__(self) -> None:
        if self.backend not in ("reference-hash", "external-service"):
            raise ValueError(f"unknown embedding backend: {self.backend!r}")
        if self.dimension < 8:
            raise ValueError("embedding dimension must be >= 8")
        if self.backend == "external-service" and not self.service_endpoint:
            raise ValueError("external-service backend requires service_endpoint")


def _token_index(token: str, dim: int) -> int:
    h = hashlib.blake2b(token.encode("utf-8"), digest_size=8, person=_HASH_INDEX_PERSON)
    return int.from_bytes(h.digest(), "little") % dim

def _token_sign(token: str) -> float:
    h = hashlib.blake2b(token.encode("utf-8"), digest_size=8, person=_HASH_SIGN_PERSON)
    return 1.0 if h.digest()[0] & 1 else -1.0


def token_vector(token: str, dim: int) -> np.ndarray:
    """The signed unit basis vector a single token hashes to."""
    vec = np.zeros(dim, dtype=np.float64)
    vec[_token_index(token, dim)] = _token_sign(token)
    return vec


def _fallback_vector(dim: int) -> EmbeddingVector:
    vec = np.zeros(dim, dtype=np.float64)
    vec[0] = 1.0
    return EmbeddingVector(vec, degenerate=True)


class _VectorCache:
    """Append-only JSONL cache of service responses, safe for threads."""

    def __init__(self, path: Path):
        self._path = path
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str], list[float]] = {}
        if path.exists():
            with path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._entries[(rec["backend"], rec["text"])] = rec["vector"]

    def get(self, backend: str, text: str) -> list[float] | None:
        with self._lock:
            return self._entries.get((backend, text))

    def put(self, backend: str, text: str, vector: list[float]) -> None:
        with self._lock:
            if (backend, text) in self._entries:
                return
            self._entries[(backend, text)] = vector
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with self._path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps({"backend": backend, "text": text, "vector": vector}) + "\n")


class Embedder:
    """Maps texts (messages or single words) to unit vectors.

    Pure function of (input, config): repeated calls return identical
    vectors. Safe for concurrent read-only use; the cache is synchronized.
    """

    def __init__(self, cfg: EmbedderConfig | None = None):
        self.cfg = cfg or EmbedderConfig()
        self._cache: _VectorCache | None = None
        if self.cfg.cache_path:
            self._cache = _VectorCache(Path(self.cfg.cache_path))

    @property
    def dimension(self) -> int:
        return self.cfg.dimension

    @property
    def backend_id(self) -> str:
        if self.cfg.backend == "reference-hash":
            return f"hash64-d{self.cfg.dimension}"
        return f"service:{self.cfg.service_endpoint}"

    def embed(self, text: str) -> EmbeddingVector:
        if self.cfg.backend == "reference-hash":
            return self._embed_hash(text)
        return self._embed_service([text])[0]

    def embed_many(self, texts: list[str]) -> list[EmbeddingVector]:
        if self.cfg.backend == "reference-hash":
            return [self._embed_hash(t) for t in texts]
        return self._embed_service(texts)

    def _embed_hash(self, text: str) -> EmbeddingVector:
        dim = self.cfg.dimension
        acc = np.zeros(dim, dtype=np.float64)
        for tok in tokenize(text).content_tokens:
            acc += token_vector(tok, dim)
        norm = float(np.linalg.norm(acc))
        if norm == 0.0:
            return _fallback_vector(dim)
        return EmbeddingVector(acc / norm)

    def _embed_service(self, texts: list[str]) -> list[EmbeddingVector]:
        out: list[EmbeddingVector | None] = [None] * len(texts)
        missing: list[int] = []
        for i, text in enumerate(texts):
            cached = self._cache.get(self.backend_id, text) if self._cache else None
            if cached is not None:
                out[i] = _normalized_or_fallback(np.asarray(cached, dtype=np.float64))
            else:
                missing.append(i)
        if missing:
            vectors = self._call_service([texts[i] for i in missing])
            for i, vec in zip(missing, vectors):
                if self._cache:
                    self._cache.put(self.backend_id, texts[i], [float(x) for x in vec])
                out[i] = _normalized_or_fallback(np.asarray(vec, dtype=np.float64))
        return [v for v in out if v is not None]

    def _call_service(self, texts: list[str]) -> list[list[float]]:
        import httpx

        url = self.cfg.service_endpoint.rstrip("/") + "/embed"
        try:
            resp = httpx.post(url, json={"texts": texts}, timeout=30.0)
            resp.raise_for_status()
        except Exception as exc:
            raise EmbeddingUnavailable(f"embedding service at {url} failed: {exc}") from exc
        body = resp.json()
        vectors = body["vectors"]
        if len(vectors) != len(texts):
            raise EmbeddingUnavailable("embedding service returned wrong vector count")
        return vectors


def _normalized_or_fallback(vec: np.ndarray) -> EmbeddingVector:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return _fallback_vector(len(vec))
    return EmbeddingVector(vec / norm)


# Dot products this close to +/-1 are rounding residue from equal (or
# antipodal) unit vectors; arccos would turn it into a ~1e-8 phantom angle.
_UNITY_DOT = 1.0 - 1e-12


def clamped_arccos(dots: np.ndarray) -> np.ndarray:
    """arccos of clamped dot products; snaps near +/-1 to exactly 0 / pi."""
    angles = np.arccos(np.clip(dots, -1.0, 1.0))
    angles = np.where(dots >= _UNITY_DOT, 0.0, angles)
    return np.where(dots <= -_UNITY_DOT, math.pi, angles)


def angular_distance(a: EmbeddingVector | np.ndarray, b: EmbeddingVector | np.ndarray) -> float:
    """Angle in radians between two unit vectors, in [0, pi].

    The dot product is clamped to [-1, 1] before arccos so rounding noise up
    to ~1e-9 past the ends never raises a domain error. Dots within rounding
    distance of +1 (equal vectors) give exactly 0.0, and of -1 exactly pi.
    """
    va = a.values if isinstance(a, EmbeddingVector) else np.asarray(a, dtype=np.float64)
    vb = b.values if isinstance(b, EmbeddingVector) else np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"dimension mismatch: {va.shape} vs {vb.shape}")
    dot = float(np.dot(va, vb))
    if dot >= _UNITY_DOT:
        return 0.0
    if dot <= -_UNITY_DOT:
        return math.pi
    return math.acos(min(1.0, max(-1.0, dot)))


def pairwise_angular(matrix: np.ndarray) -> np.ndarray:
    """Condensed-style full matrix of angular distances between unit rows."""
    return clamped_arccos(matrix @ matrix.T)
