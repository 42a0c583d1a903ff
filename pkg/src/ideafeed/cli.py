"""Command-line interface.

Every subcommand accepts ``--config`` (JSON config file), ``--seed``, and
``--format json|csv``; JSON is the default output format.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable or invalid
files, empty corpora, bad training data), 4 dependency unavailable
(embedding or edge-lookup service unreachable).
"""

from __future__ import annotations

import csv
import functools
import json
import sys
from pathlib import Path

import click

from .config import EngineConfig
from .corpus import CONDITIONS, CorpusStore
from .embedding import Embedder
from .errors import EmbeddingUnavailable, IdeafeedError, NetworkFailure
from .explain import attribute, suggest
from .kg import KnowledgeGraph
from .metrics import METRICS, bootstrap_metric
from .quality import QualityModel, load_training_file, train_quality
from .runtime import build_embedder, build_engine, data_path
from .scoring import SCORE_KINDS, Scorer

EXIT_DATA = 3
EXIT_DEPENDENCY = 4

_DEFAULT_METRICS = ("dispersion_sum", "dispersion_mean", "disparity")


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (NetworkFailure, EmbeddingUnavailable) as exc:
            _die(exc, EXIT_DEPENDENCY)
        except (IdeafeedError, OSError) as exc:
            _die(exc, EXIT_DATA)

    return wrapper


def _die(exc: Exception, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _common(fn):
    fn = click.option("--seed", default=None, type=int, help="Deterministic seed.")(fn)
    fn = click.option(
        "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", help="Output format."
    )(fn)
    fn = click.option(
        "--config", "config_path", type=click.Path(), default=None, help="JSON config file."
    )(fn)
    return fn


def _load_cfg(config_path: str | None) -> EngineConfig:
    try:
        return EngineConfig.from_file(config_path) if config_path else EngineConfig()
    except IdeafeedError as exc:
        _die(exc, EXIT_DATA)
        raise AssertionError("unreachable")


def _emit(fmt: str, data: dict, header: list[str], rows: list[list]) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _scorer(cfg: EngineConfig, condition: str, corpus_dir: str | None) -> tuple[Scorer, Embedder]:
    embedder = build_embedder(cfg)
    model = QualityModel.load(cfg.model_path or data_path("quality_model.json"))
    store = CorpusStore(Path(corpus_dir or cfg.corpus_dir or "corpora"), embedder)
    if not store.has_corpus(condition):
        store.init_corpus(condition, data_path("seed_messages.txt"))
    return Scorer(model, store.snapshot(condition), embedder), embedder


@click.group()
def main() -> None:
    """Score short messages, explain the scores, and suggest improvements."""


@main.command()
@_common
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.option("--corpus-dir", default=None, type=click.Path())
@_guarded
def serve(
    config_path: str | None, fmt: str, seed: int | None, host: str, port: int, corpus_dir: str | None
) -> None:
    """Run the HTTP feedback service."""
    import uvicorn

    from .service import create_app

    engine = build_engine(_load_cfg(config_path), corpus_dir=corpus_dir)
    uvicorn.run(create_app(engine), host=host, port=port)


@main.command()
@_common
@click.option("--data", "data_file", required=True, type=click.Path())
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--folds", default=5, type=int)
@_guarded
def train(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    data_file: str,
    out_file: str,
    folds: int,
) -> None:
    """Train the quality model from a JSONL file of {"text", "rating"} rows."""
    cfg = _load_cfg(config_path)
    embedder = build_embedder(cfg)
    examples = load_training_file(data_file, threshold=cfg.rating_threshold)
    model = train_quality(
        examples, embedder, folds=folds, seed=seed if seed is not None else cfg.training_seed,
        hidden=cfg.hidden_units,
    )
    model.save(out_file)
    _emit(
        fmt,
        {"out": out_file, "fold_aucs": list(model.fold_aucs), "train_hash": model.train_hash},
        ["fold", "auc"],
        [[i + 1, repr(a)] for i, a in enumerate(model.fold_aucs)],
    )


@main.command()
@_common
@click.option("--text", required=True)
@click.option("--condition", default="SAXC", type=click.Choice(CONDITIONS))
@click.option("--corpus-dir", default=None, type=click.Path())
@_guarded
def score(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    text: str,
    condition: str,
    corpus_dir: str | None,
) -> None:
    """Quality and diversity scores for a message against a condition's corpus."""
    scorer, _ = _scorer(_load_cfg(config_path), condition, corpus_dir)
    pair = scorer.pair(text)
    data = {
        "quality_pct": pair.quality_pct,
        "diversity_pct": pair.display_diversity_pct,
        "diversity_raw": pair.diversity_raw,
        "degenerate_embedding": pair.degenerate_embedding,
    }
    _emit(fmt, data, ["kind", "value"], [[k, repr(v)] for k, v in data.items()])


@main.command()
@_common
@click.option("--text", required=True)
@click.option("--score", "kind", default="diversity", type=click.Choice(SCORE_KINDS))
@click.option("--condition", default="SAXC", type=click.Choice(CONDITIONS))
@click.option("--corpus-dir", default=None, type=click.Path())
@_guarded
def explain(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    text: str,
    kind: str,
    condition: str,
    corpus_dir: str | None,
) -> None:
    """Per-word ablation attribution of a message's score."""
    scorer, _ = _scorer(_load_cfg(config_path), condition, corpus_dir)
    result = attribute(text, scorer.fn(kind), kind)
    top = set(result.top_tokens())
    _emit(
        fmt,
        {
            "score_kind": kind,
            "base_score": result.base_score,
            "entries": [
                {
                    "token": e.token,
                    "spans": [list(s) for s in e.spans],
                    "raw_weight": e.raw_weight,
                    "change_priority": e.change_priority,
                    "sub_score": e.sub_score,
                }
                for e in result.entries
            ],
            "highlights": [
                {"token": h.token, "span": [h.start_byte, h.end_byte], "sub_score": h.sub_score}
                for h in result.highlights
            ],
        },
        ["token", "raw_weight", "change_priority", "highlighted"],
        [[e.token, repr(e.raw_weight), repr(e.change_priority), int(e.token in top)]
         for e in result.entries],
    )


@main.command(name="suggest")
@_common
@click.option("--text", required=True)
@click.option("--score", "kind", default="diversity", type=click.Choice(SCORE_KINDS))
@click.option("--condition", default="SAXC", type=click.Choice(CONDITIONS))
@click.option("--corpus-dir", default=None, type=click.Path())
@click.option("--graph", "graph_path", default=None, type=click.Path())
@_guarded
def suggest_cmd(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    text: str,
    kind: str,
    condition: str,
    corpus_dir: str | None,
    graph_path: str | None,
) -> None:
    """Replacement-word suggestions for a message's highlighted words."""
    cfg = _load_cfg(config_path)
    scorer, embedder = _scorer(cfg, condition, corpus_dir)
    graph, _ = KnowledgeGraph.ingest(graph_path or cfg.graph_path or data_path("graph.tsv"))
    attribution = attribute(text, scorer.fn(kind), kind)
    result = suggest(
        text,
        attribution,
        graph,
        scorer.corpus,
        embedder,
        scorer.fns(),
        anchors=cfg.anchors,
        corpus_radius=cfg.corpus_radius,
        anchor_radius=cfg.anchor_radius,
        min_gain=cfg.min_gain,
        min_neighbors=cfg.min_neighbors,
        top_k=cfg.suggestion_top_k,
    )
    _emit(
        fmt,
        {
            "score_kind": kind,
            "suggestions": {
                token: [
                    {"term": s.term, "relation": s.relation, "dq": s.delta_quality_pct,
                     "dd": s.delta_diversity_pct}
                    for s in items
                ]
                for token, items in result.by_token().items()
            },
            "skipped": list(result.skipped_tokens),
        },
        ["source_token", "term", "relation", "dq", "dd", "gain"],
        [[s.source_token, s.term, s.relation, repr(s.delta_quality_pct),
          repr(s.delta_diversity_pct), repr(s.gain)] for s in result.suggestions],
    )


@main.command()
@_common
@click.option("--condition", default="SAXC", type=click.Choice(CONDITIONS))
@click.option("--metric", "chosen", multiple=True, type=click.Choice(METRICS))
@click.option("--bootstrap", "bootstrap_n", default=None, type=int,
              help="Number of bootstrap resamples.")
@click.option("--corpus-dir", default=None, type=click.Path())
@_guarded
def metrics(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    condition: str,
    chosen: tuple[str, ...],
    bootstrap_n: int | None,
    corpus_dir: str | None,
) -> None:
    """Bootstrap diversity metrics of a condition's corpus.

    CSV columns: metric,condition,value,n,boot_mean,boot_stderr,seed.
    """
    cfg = _load_cfg(config_path)
    scorer, embedder = _scorer(cfg, condition, corpus_dir)
    names = chosen or _DEFAULT_METRICS
    n_samples = bootstrap_n if bootstrap_n is not None else cfg.bootstrap_samples
    rng_seed = seed if seed is not None else 0
    reports = [
        bootstrap_metric(m, list(scorer.corpus.texts), embedder, n_samples=n_samples, seed=rng_seed)
        for m in names
    ]
    _emit(
        fmt,
        {
            "condition": condition,
            "reports": [
                {
                    "metric": r.metric,
                    "value": r.value,
                    "n": r.n_points,
                    "boot_mean": r.bootstrap.mean,
                    "boot_stderr": r.bootstrap.stderr,
                    "n_samples": r.bootstrap.n_samples,
                    "seed": r.bootstrap.seed,
                }
                for r in reports
            ],
        },
        ["metric", "condition", "value", "n", "boot_mean", "boot_stderr", "seed"],
        [[r.metric, condition, repr(r.value), r.n_points, repr(r.bootstrap.mean),
          repr(r.bootstrap.stderr), r.bootstrap.seed] for r in reports],
    )


@main.command(name="ingest-kg")
@_common
@click.argument("path", type=click.Path())
@click.option("--out", "out_path", default=None, type=click.Path(), help="Write canonical TSV copy.")
@_guarded
def ingest_kg(
    config_path: str | None, fmt: str, seed: int | None, path: str, out_path: str | None
) -> None:
    """Validate and summarize a relation edge file."""
    graph, stats = KnowledgeGraph.ingest(path)
    if out_path:
        graph.export(out_path)
    data = {"edges": stats.edges, "malformed": stats.malformed, "comments": stats.comments}
    _emit(fmt, data, ["field", "count"], [[k, v] for k, v in data.items()])


@main.command(name="init-corpus")
@_common
@click.option("--condition", default="all")
@click.option("--seed-file", default=None, type=click.Path())
@click.option("--n", default=50, type=int)
@click.option("--corpus-dir", default=None, type=click.Path())
@_guarded
def init_corpus(
    config_path: str | None,
    fmt: str,
    seed: int | None,
    condition: str,
    seed_file: str | None,
    n: int,
    corpus_dir: str | None,
) -> None:
    """Seed one condition's corpus (or all) from a one-message-per-line file."""
    cfg = _load_cfg(config_path)
    if condition != "all" and condition not in CONDITIONS:
        raise click.UsageError(f"condition must be one of {CONDITIONS} or 'all'")
    embedder = build_embedder(cfg)
    store = CorpusStore(Path(corpus_dir or cfg.corpus_dir or "corpora"), embedder)
    src = seed_file or data_path("seed_messages.txt")
    targets = CONDITIONS if condition == "all" else (condition,)
    results = {}
    for cond in targets:
        snap = store.init_corpus(cond, src, n=n, seed=seed)
        results[cond] = {"entries": len(snap), "version": snap.version}
    _emit(
        fmt,
        {"initialized": results},
        ["condition", "entries", "version"],
        [[cond, info["entries"], info["version"]] for cond, info in results.items()],
    )


if __name__ == "__main__":
    main()
