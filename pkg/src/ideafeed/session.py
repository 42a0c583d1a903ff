"""Ideation records, prompt draws, and per-session lineage bookkeeping."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import IterationOutOfOrder, PromptsExhausted

if TYPE_CHECKING:
    from .scoring import ScorePair

MAX_ITERATIONS = 3


@dataclass(frozen=True)
class IdeationRecord:
    """One iteration of one ideation."""

    id: str
    session_id: str
    prompt_id: str
    condition: str
    iteration: int  # 1..3
    text: str
    scores: "ScorePair | None" = None
    parent: str | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.iteration <= MAX_ITERATIONS:
            raise IterationOutOfOrder(f"iteration must be 1..{MAX_ITERATIONS}, got {self.iteration}")


@dataclass(frozen=True)
class Prompt:
    id: str
    text: str


class PromptSet:
    """A fixed list of prompt phrases, drawn without replacement per session."""

    def __init__(self, phrases: list[str]):
        self.phrases = [p.strip() for p in phrases if p.strip()]

    @classmethod
    def load(cls, path) -> "PromptSet":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(fh.read().splitlines())

    def __len__(self) -> int:
        return len(self.phrases)

    def cursor(self, seed: int | None = None) -> "PromptCursor":
        order = list(range(len(self.phrases)))
        random.Random(seed).shuffle(order)
        return PromptCursor(self, order)


class PromptCursor:
    """Per-session draw state. A fixed seed reproduces the same sequence."""

    def __init__(self, prompt_set: PromptSet, order: list[int]):
        self._set = prompt_set
        self._order = order
        self._pos = 0

    def next_prompt(self) -> Prompt:
        if self._pos >= len(self._order):
            raise PromptsExhausted(f"all {len(self._order)} prompts drawn")
        idx = self._order[self._pos]
        self._pos += 1
        return Prompt(id=f"p{idx + 1:03d}", text=self._set.phrases[idx])


@dataclass
class Session:
    """In-memory state of one ideation session under one condition."""

    id: str
    condition: str
    cursor: PromptCursor
    current_prompt: Prompt
    records: dict[str, IdeationRecord] = field(default_factory=dict)
    lineage: dict[str, list[str]] = field(default_factory=dict)  # prompt_id -> record ids by iteration

    def expect_iteration(self, prompt_id: str) -> int:
        return len(self.lineage.get(prompt_id, ())) + 1

    def add_record(self, record: IdeationRecord) -> None:
        chain = self.lineage.setdefault(record.prompt_id, [])
        if record.iteration != len(chain) + 1:
            raise IterationOutOfOrder(
                f"expected iteration {len(chain) + 1} for prompt {record.prompt_id}, got {record.iteration}"
            )
        chain.append(record.id)
        self.records[record.id] = record

    def record_at(self, prompt_id: str, iteration: int) -> IdeationRecord:
        chain = self.lineage.get(prompt_id, [])
        if not 1 <= iteration <= len(chain):
            raise KeyError(f"no iteration {iteration} for prompt {prompt_id}")
        return self.records[chain[iteration - 1]]
