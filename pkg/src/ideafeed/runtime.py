"""Wiring helpers: resolve bundled data files and assemble a live engine."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .config import EngineConfig
from .corpus import CONDITIONS, CorpusStore
from .embedding import Embedder, EmbedderConfig
from .engine import FeedbackEngine
from .kg import KnowledgeGraph
from .quality import QualityModel
from .session import PromptSet

DEFAULT_SEED_COUNT = 50


def data_path(name: str) -> str:
    """Filesystem path of a bundled data file."""
    return str(resources.files("ideafeed").joinpath("data", name))


def build_embedder(config: EngineConfig) -> Embedder:
    return Embedder(
        EmbedderConfig(
            backend=config.embedding_backend,
            dimension=config.embedding_dim,
            service_endpoint=config.embedding_endpoint,
            cache_path=config.embedding_cache_path,
        )
    )


def build_engine(config: EngineConfig, corpus_dir: str | Path | None = None) -> FeedbackEngine:
    """Assemble an engine from a config, falling back to bundled data.

    ``corpus_dir`` (or ``config.corpus_dir``) holds the per-condition
    corpora; conditions without a stored corpus are seeded from the bundled
    seed-message file so diversity scoring always has a prior set.
    """
    embedder = build_embedder(config)
    model = QualityModel.load(config.model_path or data_path("quality_model.json"))
    graph, _ = KnowledgeGraph.ingest(config.graph_path or data_path("graph.tsv"))
    prompts = PromptSet.load(config.prompts_path or data_path("prompts.txt"))
    root = Path(corpus_dir or config.corpus_dir or "corpora")
    store = CorpusStore(root, embedder)
    ensure_corpora(store, data_path("seed_messages.txt"))
    return FeedbackEngine(config, model, store, graph, embedder, prompts)


def ensure_corpora(
    store: CorpusStore,
    seed_file: str | Path,
    conditions: tuple[str, ...] = CONDITIONS,
    n: int = DEFAULT_SEED_COUNT,
) -> None:
    """Initialize any condition corpus that does not exist yet on disk."""
    for cond in conditions:
        if not store.has_corpus(cond):
            store.init_corpus(cond, seed_file, n=n)
