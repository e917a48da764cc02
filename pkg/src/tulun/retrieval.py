"""Evidence retrieval: glossary n-gram matching and BM25 over TM sources.

Glossary entries are matched when their normalized token sequence (length
1 or 2) occurs contiguously in the query's normalized tokens. Translation
memories are ranked by Okapi BM25 over the source side, queried with the
normalized unigrams of the input.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass

from .store import GlossaryEntry, TmEntry
from .textproc import normalized_tokens, tokenize


@dataclass(frozen=True)
class GlossaryMatch:
    entry: GlossaryEntry
    matched_gram: tuple  # normalized tokens, length 1 or 2
    input_span: tuple  # (start, end) byte span of first occurrence in the query

    def to_dict(self) -> dict:
        return {
            "entry": {
                "id": self.entry.id,
                "source_term": self.entry.source_term,
                "target_text": self.entry.target_text,
            },
            "matched_gram": list(self.matched_gram),
            "input_span": list(self.input_span),
        }


@dataclass(frozen=True)
class TmMatch:
    entry: TmEntry
    score: float
    rank: int

    def to_dict(self) -> dict:
        return {
            "entry": {
                "id": self.entry.id,
                "source_text": self.entry.source_text,
                "target_text": self.entry.target_text,
                "origin": self.entry.origin,
            },
            "score": self.score,
            "rank": self.rank,
        }


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")


def match_glossary(query_text: str, entries: list[GlossaryEntry],
                   cap: int = 0) -> list[GlossaryMatch]:
    """All glossary entries whose 1- or 2-token term occurs in the query.

    Ordered by first occurrence position in the query, ties by entry id;
    one match per entry (at its first occurrence). ``cap`` > 0 truncates.
    """
    tokens = tokenize(query_text)
    if not tokens:
        return []
    norm = [t.normalized for t in tokens]
    matches = []
    for entry in entries:
        gram = tuple(normalized_tokens(entry.source_term))
        if len(gram) not in (1, 2):
            continue
        k = len(gram)
        for i in range(len(norm) - k + 1):
            if tuple(norm[i : i + k]) == gram:
                span = (tokens[i].start, tokens[i + k - 1].end)
                matches.append(GlossaryMatch(entry=entry, matched_gram=gram, input_span=span))
                break
    matches.sort(key=lambda m: (m.input_span[0], m.entry.id))
    if cap > 0:
        matches = matches[:cap]
    return matches


class TmIndex:
    """Inverted index with Okapi BM25 scoring over TM source texts.

    Incremental upserts/deletes keep corpus statistics identical to a full
    rebuild. Queries may run concurrently; mutations are serialized and
    atomically visible.
    """

    def __init__(self, params: Bm25Params | None = None):
        self.params = params or Bm25Params()
        self._lock = threading.RLock()
        self._entries: dict[int, TmEntry] = {}
        self._doc_terms: dict[int, Counter] = {}
        self._doc_len: dict[int, int] = {}
        self._postings: dict[str, dict[int, int]] = {}
        self._total_len = 0

    @classmethod
    def build(cls, entries: list[TmEntry], params: Bm25Params | None = None) -> "TmIndex":
        index = cls(params)
        for entry in entries:
            index.upsert(entry)
        return index

    def apply(self, op: str, payload) -> None:
        if op == "upsert":
            self.upsert(payload)
        elif op == "delete":
            self.delete(payload)
        else:
            raise ValueError(f"unknown index op {op!r}")

    def upsert(self, entry: TmEntry) -> None:
        with self._lock:
            if entry.id in self._entries:
                self._remove(entry.id)
            terms = Counter(normalized_tokens(entry.source_text))
            self._entries[entry.id] = entry
            self._doc_terms[entry.id] = terms
            length = sum(terms.values())
            self._doc_len[entry.id] = length
            self._total_len += length
            for term, tf in terms.items():
                self._postings.setdefault(term, {})[entry.id] = tf

    def delete(self, entry_id: int) -> None:
        with self._lock:
            if entry_id in self._entries:
                self._remove(entry_id)

    def _remove(self, entry_id: int) -> None:
        terms = self._doc_terms.pop(entry_id)
        self._total_len -= self._doc_len.pop(entry_id)
        del self._entries[entry_id]
        for term in terms:
            bucket = self._postings[term]
            del bucket[entry_id]
            if not bucket:
                del self._postings[term]

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def retrieve(self, query_text: str, n: int) -> list[TmMatch]:
        """Top-n entries by BM25 score; zero-score docs excluded, ties by id."""
        if n <= 0:
            return []
        with self._lock:
            doc_count = len(self._entries)
            if doc_count == 0:
                return []
            avg_len = self._total_len / doc_count
            k1, b = self.params.k1, self.params.b
            scores: dict[int, float] = {}
            for term in sorted(set(normalized_tokens(query_text))):
                bucket = self._postings.get(term)
                if not bucket:
                    continue
                df = len(bucket)
                idf = math.log(1.0 + (doc_count - df + 0.5) / (df + 0.5))
                for doc_id, tf in bucket.items():
                    norm = k1 * (1.0 - b + b * self._doc_len[doc_id] / avg_len) if avg_len > 0 else k1
                    scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (k1 + 1.0) / (tf + norm)
            ranked = sorted(
                ((doc_id, s) for doc_id, s in scores.items() if s > 0.0),
                key=lambda pair: (-pair[1], pair[0]),
            )[:n]
            return [
                TmMatch(entry=self._entries[doc_id], score=score, rank=rank)
                for rank, (doc_id, score) in enumerate(ranked, 1)
            ]
