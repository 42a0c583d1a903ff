"""Tokenization, stop-word flagging, and rule-based lemmatization.

The tokenizer grammar is deliberately simple: a token is a maximal run of
Unicode letters or digits (underscore counts as punctuation), lowercased.
Everything else — whitespace, punctuation, symbols — separates tokens and is
dropped. ``"Let's"`` therefore tokenizes as ``let``, ``s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_VOWELS = set("aeiou")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The bundled stop-word list (~130 words, versioned with the package)."""
    text = resources.files("ideafeed.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class TokenList:
    """Ordered lowercased tokens with per-token content flags and spans.

    ``spans`` holds character offsets into the original text; ``content_mask``
    is True for tokens that are not stop words.
    """

    tokens: tuple[str, ...] = ()
    content_mask: tuple[bool, ...] = ()
    spans: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not (len(self.tokens) == len(self.content_mask) == len(self.spans)):
            raise ValueError("tokens, content_mask and spans must align")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def content_tokens(self) -> tuple[str, ...]:
        return tuple(t for t, c in zip(self.tokens, self.content_mask) if c)


def tokenize(text: str) -> TokenList:
    """Split ``text`` into lowercased tokens, flagging non-stop-words.

    Blank or punctuation-only input yields an empty TokenList.
    """
    stops = stopwords()
    tokens: list[str] = []
    mask: list[bool] = []
    spans: list[tuple[int, int]] = []
    for m in _TOKEN_RE.finditer(text):
        tok = m.group(0).lower()
        tokens.append(tok)
        mask.append(tok not in stops)
        spans.append((m.start(), m.end()))
    return TokenList(tuple(tokens), tuple(mask), tuple(spans))


def byte_span(text: str, span: tuple[int, int]) -> tuple[int, int]:
    """Convert a character span into UTF-8 byte offsets into ``text``."""
    start, end = span
    head = len(text[:start].encode("utf-8"))
    return head, head + len(text[start:end].encode("utf-8"))


# Irregular forms that the suffix rules below would mangle. Kept small on
# purpose; unknown irregulars fall through to the rules unchanged.
_LEMMA_EXCEPTIONS = {
    "men": "man",
    "women": "woman",
    "children": "child",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "lives": "life",
    "selves": "self",
    "leaves": "leaf",
    "ran": "run",
    "swam": "swim",
    "began": "begin",
    "went": "go",
    "gone": "go",
    "better": "good",
    "best": "good",
    "worse": "bad",
    "worst": "bad",
    "bodies": "body",
}


def _is_cvc(stem: str) -> bool:
    # consonant-vowel-consonant tail, final letter not w/x/y: "mak" -> "make"
    if len(stem) < 3:
        return False
    a, b, c = stem[-3], stem[-2], stem[-1]
    return a not in _VOWELS and b in _VOWELS and c not in _VOWELS and c not in "wxy"


def _strip_suffix(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("es") and len(word) > 3:
        stem = word[:-2]
        if stem.endswith(("sh", "ch", "x", "z", "ss", "o")):
            return stem
        return word[:-1]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        return word[:-1]
    for suffix in ("ing", "ed"):
        if word.endswith(suffix) and len(word) > len(suffix) + 2:
            stem = word[: -len(suffix)]
            if not any(ch in _VOWELS for ch in stem):
                return word
            if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
                return stem[:-1]
            if _is_cvc(stem):
                return stem + "e"
            return stem
    return word


def lemmatize(word: str) -> str:
    """Reduce ``word`` to a base form using the exception table + suffix rules.

    This is intentionally a lightweight approximation: good enough to map
    inflected message words onto knowledge-graph terms, no POS awareness.
    """
    word = word.lower()
    if word in _LEMMA_EXCEPTIONS:
        return _LEMMA_EXCEPTIONS[word]
    return _strip_suffix(word)
