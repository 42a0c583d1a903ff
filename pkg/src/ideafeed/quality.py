"""Quality score: a small trained classifier over message embeddings.

The model is a two-layer fully-connected network — tanh hidden layer,
sigmoid output — trained with full-batch gradient descent on the feature
vector [embedding || normalized length]. Normalized length is the token
count divided by 50, capped at 1.0. The quality score is 100x the sigmoid
confidence that the message belongs to the high-rated class.

Training is deterministic for a fixed (examples, seed, folds) triple, down
to the serialized model bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedder
from .errors import InsufficientData, SingleClass
from .textproc import tokenize

LENGTH_DIVISOR = 50
DEFAULT_RATING_THRESHOLD = 1.17  # binarization cut on the -3..+3 rating scale
MIN_TRAIN_EXAMPLES = 20

_EPOCHS = 600
_LEARNING_RATE = 1.0


@dataclass(frozen=True)
class TrainingExample:
    text: str
    rating: float
    label: bool

    @classmethod
    def from_rating(cls, text: str, rating: float, threshold: float = DEFAULT_RATING_THRESHOLD) -> "TrainingExample":
        return cls(text=text, rating=float(rating), label=float(rating) > threshold)


def load_training_file(path, threshold: float = DEFAULT_RATING_THRESHOLD) -> list[TrainingExample]:
    """Read a JSONL training file of {"text": ..., "rating": ...} records."""
    examples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            examples.append(TrainingExample.from_rating(rec["text"], rec["rating"], threshold))
    return examples


def normalized_length(text: str) -> float:
    return min(len(tokenize(text)) / LENGTH_DIVISOR, 1.0)


def features_for(text: str, embedder: Embedder) -> np.ndarray:
    """[embedding || normalized length]; length is recomputed per variant."""
    emb = embedder.embed(text)
    return np.concatenate([emb.values, [normalized_length(text)]])


@dataclass
class QualityModel:
    """Immutable after training; the forward pass is deterministic."""

    dim: int
    hidden: int
    w1: np.ndarray  # (dim+1, hidden)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float
    seed: int
    train_hash: str
    fold_aucs: list[float] = field(default_factory=list)
    activation: str = "tanh"

    def forward(self, features: np.ndarray) -> float:
        hidden = np.tanh(features @ self.w1 + self.b1)
        logit = float(hidden @ self.w2 + self.b2)
        return 1.0 / (1.0 + np.exp(-logit))

    def to_json(self) -> str:
        doc = {
            "dim": self.dim,
            "hidden": self.hidden,
            "activation": self.activation,
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2,
            "seed": self.seed,
            "train_hash": self.train_hash,
            "fold_aucs": self.fold_aucs,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "QualityModel":
        doc = json.loads(text)
        return cls(
            dim=doc["dim"],
            hidden=doc["hidden"],
            w1=np.asarray(doc["w1"], dtype=np.float64),
            b1=np.asarray(doc["b1"], dtype=np.float64),
            w2=np.asarray(doc["w2"], dtype=np.float64),
            b2=float(doc["b2"]),
            seed=doc["seed"],
            train_hash=doc["train_hash"],
            fold_aucs=list(doc["fold_aucs"]),
            activation=doc.get("activation", "tanh"),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "QualityModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def auc_score(labels: np.ndarray, scores: np.ndarray) -> float:
    """Rank-based AUC (Mann-Whitney), with average ranks for tied scores."""
    labels = np.asarray(labels, dtype=bool)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(labels.sum())
    n_neg = int((~labels).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUC needs both classes present")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    pos_rank_sum = float(ranks[labels].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _train_net(
    x: np.ndarray, y: np.ndarray, hidden: int, rng: np.random.Generator,
    epochs: int = _EPOCHS, lr: float = _LEARNING_RATE,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    m, d = x.shape
    w1 = rng.normal(0.0, 1.0 / np.sqrt(d), size=(d, hidden))
    b1 = np.zeros(hidden)
    w2 = rng.normal(0.0, 1.0 / np.sqrt(hidden), size=hidden)
    b2 = 0.0
    for _ in range(epochs):
        z1 = x @ w1 + b1
        a1 = np.tanh(z1)
        logits = a1 @ w2 + b2
        p = 1.0 / (1.0 + np.exp(-logits))
        dz2 = (p - y) / m
        gw2 = a1.T @ dz2
        gb2 = float(dz2.sum())
        dz1 = np.outer(dz2, w2) * (1.0 - a1 * a1)
        gw1 = x.T @ dz1
        gb1 = dz1.sum(axis=0)
        w1 -= lr * gw1
        b1 -= lr * gb1
        w2 -= lr * gw2
        b2 -= lr * gb2
    return w1, b1, w2, b2


def _balance(indices_pos: np.ndarray, indices_neg: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Downsample the majority class; keeps input order within each class."""
    n = min(len(indices_pos), len(indices_neg))
    keep_pos = np.sort(rng.permutation(indices_pos)[:n])
    keep_neg = np.sort(rng.permutation(indices_neg)[:n])
    return np.sort(np.concatenate([keep_pos, keep_neg]))


def train_quality(
    examples: list[TrainingExample],
    embedder: Embedder,
    folds: int = 5,
    seed: int = 0,
    hidden: int = 16,
    epochs: int = _EPOCHS,
    lr: float = _LEARNING_RATE,
) -> QualityModel:
    """Train the quality classifier, reporting per-fold AUC in the model.

    Class balance is enforced by downsampling the majority class (seeded).
    Cross-validation folds are stratified; the returned model is trained on
    the full balanced set.
    """
    if len(examples) < MIN_TRAIN_EXAMPLES:
        raise InsufficientData(f"need >= {MIN_TRAIN_EXAMPLES} examples, got {len(examples)}")
    if folds < 2:
        raise ValueError("folds must be >= 2")
    labels = np.array([e.label for e in examples], dtype=bool)
    if labels.all() or (~labels).all():
        raise SingleClass("training set must contain both classes")

    train_hash = hashlib.sha256(
        json.dumps([[e.text, e.rating, e.label] for e in examples]).encode("utf-8")
    ).hexdigest()

    rng = np.random.default_rng(seed)
    pos_idx = np.flatnonzero(labels)
    neg_idx = np.flatnonzero(~labels)
    keep = _balance(pos_idx, neg_idx, rng)

    x = np.vstack([features_for(examples[i].text, embedder) for i in keep])
    y = labels[keep].astype(np.float64)

    # stratified folds: seeded shuffle within each class, then round-robin
    fold_of = np.empty(len(keep), dtype=int)
    for cls_mask in (y == 1.0, y == 0.0):
        cls_positions = np.flatnonzero(cls_mask)
        shuffled = rng.permutation(cls_positions)
        for pos, idx in enumerate(shuffled):
            fold_of[idx] = pos % folds

    fold_aucs: list[float] = []
    for k in range(folds):
        train_mask = fold_of != k
        test_mask = ~train_mask
        if y[test_mask].min(initial=1.0) == y[test_mask].max(initial=0.0):
            continue  # degenerate fold, no AUC defined
        w1, b1, w2, b2 = _train_net(x[train_mask], y[train_mask], hidden, np.random.default_rng(seed + 1000 + k), epochs, lr)
        a1 = np.tanh(x[test_mask] @ w1 + b1)
        scores = 1.0 / (1.0 + np.exp(-(a1 @ w2 + b2)))
        fold_aucs.append(auc_score(y[test_mask].astype(bool), scores))

    w1, b1, w2, b2 = _train_net(x, y, hidden, np.random.default_rng(seed), epochs, lr)
    return QualityModel(
        dim=embedder.dimension,
        hidden=hidden,
        w1=w1,
        b1=b1,
        w2=w2,
        b2=b2,
        seed=seed,
        train_hash=train_hash,
        fold_aucs=fold_aucs,
    )


def predict_quality(model: QualityModel, text: str, embedder: Embedder) -> float:
    """Quality score in [0, 100]: 100x the classifier confidence."""
    if embedder.dimension != model.dim:
        raise ValueError(f"model expects dim {model.dim}, embedder has {embedder.dimension}")
    return float(100.0 * model.forward(features_for(text, embedder)))
