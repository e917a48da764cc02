"""Tokenization, normalization and n-gram extraction.

Shared by glossary matching, BM25 retrieval, diff highlighting and the
chrF++ metric. Tokens are maximal runs of Unicode letters/digits, with
apostrophes and hyphens kept when they sit between letter runs;
punctuation runs are discarded. Spans are byte offsets into the UTF-8
encoding of the input so they are unambiguous across clients.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

# [^\W_] = Unicode letter or digit (\w minus underscore).
_WORD_RE = re.compile(r"[^\W_]+(?:['’ʼ-][^\W_]+)*")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    start: int  # byte offset, inclusive
    end: int  # byte offset, exclusive


def _byte_offsets(text: str) -> list[int]:
    """Cumulative UTF-8 byte length for each character boundary."""
    offsets = [0] * (len(text) + 1)
    total = 0
    for i, ch in enumerate(text):
        total += len(ch.encode("utf-8"))
        offsets[i + 1] = total
    return offsets

def tokenize(text: str) -> list[Token]:
    """Split ``text`` into word tokens with byte spans, left to right."""
    if not text:
        return []
    offsets = _byte_offsets(text)
    tokens = []
    for m in _WORD_RE.finditer(text):
        surface = m.group(0)
        tokens.append(
            Token(
                surface=surface,
                normalized=surface.casefold(),
                start=offsets[m.start()],
                end=offsets[m.end()],
            )
        )
    return tokens


def normalized_tokens(text: str) -> list[str]:
    return [t.normalized for t in tokenize(text)]


def ngrams(tokens: list[Token], orders: Iterable[int]) -> Counter:
    """Multiset of (order, normalized token tuple) over contiguous runs."""
    counts: Counter = Counter()
    norm = [t.normalized for t in tokens]
    for k in orders:
        if k < 1:
            raise ValueError("n-gram order must be >= 1")
        for i in range(len(norm) - k + 1):
            counts[(k, tuple(norm[i : i + k]))] += 1
    return counts


def char_ngrams(text: str, max_order: int) -> dict[int, Counter]:
    """Per-order character n-gram multisets, whitespace removed first."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    chars = "".join(text.split())
    out: dict[int, Counter] = {}
    for k in range(1, max_order + 1):
        counts: Counter = Counter()
        for i in range(len(chars) - k + 1):
            counts[chars[i : i + k]] += 1
        out[k] = counts
    return out
