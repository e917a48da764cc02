"""ChrF++ scoring and the evaluation runner.

ChrF++ combines character n-gram (orders 1..char_order) and word n-gram
(orders 1..word_order) F-scores. Word tokens are whitespace-split with a
single leading or trailing punctuation character split off, the metric's
canonical rule. Characters are scored on raw case; whitespace is removed
before character n-gram extraction. Orders absent from both hypothesis
and reference are skipped from the mean.
"""

from __future__ import annotations

import unicodedata
import uuid
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from .errors import TulunError, ValidationError
from .pipeline import Engine
from .store import EvalDataset, EvalItem, EvalRun, EvalRunItem
from .textproc import char_ngrams


@dataclass(frozen=True)
class ChrfParams:
    char_order: int = 6
    word_order: int = 2
    beta: float = 2.0

    def __post_init__(self):
        if self.char_order < 1:
            raise ValueError("char_order must be >= 1")
        if self.word_order < 0:
            raise ValueError("word_order must be >= 0")
        if self.beta <= 0:
            raise ValueError("beta must be > 0")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _punct_split_words(text: str) -> list[str]:
    """Whitespace tokens with one leading or trailing punctuation split off."""
    words = []
    for word in text.split():
        if len(word) == 1:
            words.append(word)
        elif _is_punct(word[-1]):
            words.extend([word[:-1], word[-1]])
        elif _is_punct(word[0]):
            words.extend([word[0], word[1:]])
        else:
            words.append(word)
    return words


def _word_ngram_counts(text: str, max_order: int) -> dict[int, Counter]:
    words = _punct_split_words(text)
    out: dict[int, Counter] = {}
    for k in range(1, max_order + 1):
        counts: Counter = Counter()
        for i in range(len(words) - k + 1):
            counts[tuple(words[i : i + k])] += 1
        out[k] = counts
    return out


def _order_stats(hypothesis: str, reference: str, params: ChrfParams) -> list[tuple]:
    """Per order: (matched, hypothesis total, reference total) n-gram counts.

    Char orders first (1..char_order), then word orders (1..word_order).
    """
    stats = []
    hyp_chars = char_ngrams(hypothesis, params.char_order)
    ref_chars = char_ngrams(reference, params.char_order)
    for k in range(1, params.char_order + 1):
        matched = sum((hyp_chars[k] & ref_chars[k]).values())
        stats.append((matched, sum(hyp_chars[k].values()), sum(ref_chars[k].values())))
    if params.word_order > 0:
        hyp_words = _word_ngram_counts(hypothesis, params.word_order)
        ref_words = _word_ngram_counts(reference, params.word_order)
        for k in range(1, params.word_order + 1):
            matched = sum((hyp_words[k] & ref_words[k]).values())
            stats.append((matched, sum(hyp_words[k].values()), sum(ref_words[k].values())))
    return stats


def _score_from_stats(stats: list[tuple], beta: float) -> float:
    f_scores = []
    for matched, hyp_total, ref_total in stats:
        if hyp_total == 0 and ref_total == 0:
            continue  # order absent from both sides
        precision = matched / hyp_total if hyp_total else 0.0
        recall = matched / ref_total if ref_total else 0.0
        if precision + recall == 0.0:
            f_scores.append(0.0)
        else:
            b2 = beta * beta
            f_scores.append((1 + b2) * precision * recall / (b2 * precision + recall))
    if not f_scores:
        return 0.0
    return 100.0 * sum(f_scores) / len(f_scores)


def chrfpp_sentence(hypothesis: str, reference: str,
                    params: ChrfParams | None = None) -> float:
    params = params or ChrfParams()
    return _score_from_stats(_order_stats(hypothesis, reference, params), params.beta)


def chrfpp_corpus(pairs: list[tuple], params: ChrfParams | None = None) -> float:
    """Corpus score from pooled n-gram statistics (not a mean of sentence scores)."""
    if not pairs:
        raise ValidationError("chrfpp_corpus requires at least one pair")
    params = params or ChrfParams()
    n_orders = params.char_order + params.word_order
    totals = [(0, 0, 0)] * n_orders
    for hypothesis, reference in pairs:
        stats = _order_stats(hypothesis, reference, params)
        totals = [
            (tm + m, th + h, tr + r)
            for (tm, th, tr), (m, h, r) in zip(totals, stats)
        ]
    return _score_from_stats(totals, params.beta)


def lookup_reference(source_text: str,
                     datasets: list[EvalDataset]) -> Optional[tuple]:
    """Exact match on trimmed source_text; first dataset in creation order wins."""
    needle = source_text.strip()
    for dataset in datasets:
        for item in dataset.items:
            if item.source_text.strip() == needle:
                return dataset.id, item
    return None


def run_eval(dataset: EvalDataset, engine: Engine,
             params: ChrfParams | None = None, parallelism: int = 4,
             run_id: str | None = None, persist: bool = True) -> EvalRun:
    """Score MT-only vs MT+post-edit against the dataset references.

    Items failing on a backend error are recorded but excluded from the
    corpus aggregation; result ordering is always by item index.
    """
    if not dataset.items:
        raise ValidationError("cannot run eval on an empty dataset")
    params = params or ChrfParams()
    run = EvalRun(id=run_id or uuid.uuid4().hex[:12], dataset_id=dataset.id,
                  started_at=datetime.now(timezone.utc).isoformat())

    def score_item(item: EvalItem) -> EvalRunItem:
        try:
            result = engine.translate(item.source_text)
            if result.degraded:
                raise TulunError(result.error_detail or "post-editing degraded")
            return EvalRunItem(
                index=item.index,
                mt_output=result.mt_text,
                post_edited_output=result.post_edited_text,
                chrfpp_mt=chrfpp_sentence(result.mt_text, item.reference_text, params),
                chrfpp_ape=chrfpp_sentence(result.post_edited_text, item.reference_text, params),
            )
        except TulunError as exc:
            return EvalRunItem(index=item.index, error=str(exc))

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        run.per_item = sorted(pool.map(score_item, dataset.items),
                              key=lambda it: it.index)

    scored = [it for it in run.per_item if not it.error]
    run.failed_items = len(run.per_item) - len(scored)
    by_index = {it.index: it for it in dataset.items}
    if scored:
        run.corpus_chrfpp_mt = chrfpp_corpus(
            [(it.mt_output, by_index[it.index].reference_text) for it in scored], params)
        run.corpus_chrfpp_ape = chrfpp_corpus(
            [(it.post_edited_output, by_index[it.index].reference_text) for it in scored], params)
    run.status = "done" if scored else "failed"
    run.finished_at = datetime.now(timezone.utc).isoformat()
    if persist:
        engine.store.save_run(run)
    return run


def export_run_csv(run: EvalRun, dataset: EvalDataset) -> str:
    """Per-item CSV report: index,source,mt,ape,chrfpp_mt,chrfpp_ape."""
    import csv
    import io

    by_index = {it.index: it for it in dataset.items}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "source", "mt", "ape", "chrfpp_mt", "chrfpp_ape"])
    for item in run.per_item:
        source = by_index[item.index].source_text if item.index in by_index else ""
        if item.error:
            writer.writerow([item.index, source, "", "", "", ""])
        else:
            writer.writerow([
                item.index, source, item.mt_output, item.post_edited_output,
                f"{item.chrfpp_mt:.4f}", f"{item.chrfpp_ape:.4f}",
            ])
    return buf.getvalue()
