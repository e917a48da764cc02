import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import bm25_rank, glossary_scan
from tulun.retrieval import Bm25Params, TmIndex, match_glossary
from tulun.store import GlossaryEntry, TmEntry


def glossary(*pairs):
    return [GlossaryEntry(source_term=term, target_text=target, id=i + 1)
            for i, (term, target) in enumerate(pairs)]


BURN_GLOSSARY = glossary(
    ("check", "vt. kontrola."),
    ("burn", "n. keimadura (ahi-haan)"),
    ("assessment", "n. avaliasaun."),
)

SENTENCE = ("Always check burn again a couple of hours after first assessment, "
            "unless burn has been dressed.")


def test_burn_sentence_matches():
    matches = match_glossary(SENTENCE, BURN_GLOSSARY)
    assert [m.entry.source_term for m in matches] == ["check", "burn", "assessment"]


def test_no_shared_tokens():
    assert match_glossary("nothing relevant here", BURN_GLOSSARY) == []


def test_bigram_and_unigram_both_match():
    entries = glossary(("water", "wota"), ("water supply", "wota saplae"))
    matches = match_glossary("the water supply failed", entries)
    assert [m.entry.source_term for m in matches] == ["water", "water supply"]
    bigram = matches[1]
    assert bigram.matched_gram == ("water", "supply")
    # oracle agreement
    assert [m.entry.id for m in matches] == glossary_scan(
        "the water supply failed", [(e.id, e.source_term) for e in entries])


def test_long_terms_never_match():
    entries = glossary(("one two three", "x"))
    assert match_glossary("one two three", entries) == []


def test_case_folded_matching():
    entries = glossary(("Burn", "keimadura"))
    matches = match_glossary("the BURN was dressed", entries)
    assert len(matches) == 1


def test_match_span_points_into_query():
    matches = match_glossary(SENTENCE, BURN_GLOSSARY)
    raw = SENTENCE.encode("utf-8")
    for m in matches:
        start, end = m.input_span
        text = raw[start:end].decode("utf-8").casefold()
        assert text.split() == list(m.matched_gram) or \
            [w for w in text.replace("-", " ").split()] == list(m.matched_gram)


def test_injection_cap():
    matches = match_glossary(SENTENCE, BURN_GLOSSARY, cap=2)
    assert [m.entry.source_term for m in matches] == ["check", "burn"]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["cat", "dog", "water", "burn", "sat", "ran"]),
                min_size=0, max_size=12),
       st.lists(st.tuples(st.sampled_from(["cat", "dog sat", "water", "ran",
                                           "burn dressed", "sat"]),
                          st.just("t")), min_size=0, max_size=8))
def test_glossary_matches_oracle(query_words, terms):
    query = " ".join(query_words)
    entries = [GlossaryEntry(source_term=t, target_text=tt, id=i + 1)
               for i, (t, tt) in enumerate(terms)]
    got = [m.entry.id for m in match_glossary(query, entries)]
    expected = glossary_scan(query, [(e.id, e.source_term) for e in entries])
    assert got == expected


# -- BM25 -----------------------------------------------------------------


def tm(entries):
    return [TmEntry(source_text=text, target_text="t", id=i)
            for i, text in entries.items()]


def test_retrieve_n_zero():
    index = TmIndex.build(tm({1: "cat sat"}))
    assert index.retrieve("cat", 0) == []


def test_single_document_closed_formula():
    index = TmIndex.build(tm({1: "cat sat"}))
    matches = index.retrieve("cat", 5)
    assert len(matches) == 1
    # D=1, df=1, tf=1, len=avg_len: score = ln(1 + 0.5/1.5) = ln(4/3)
    assert matches[0].score == pytest.approx(math.log(4 / 3), abs=1e-12)
    assert matches[0].rank == 1


def test_three_document_ranking_matches_oracle():
    docs = {1: "cat sat", 2: "cat cat sat", 3: "dog ran"}
    index = TmIndex.build(tm(docs))
    got = [(m.entry.id, m.score) for m in index.retrieve("cat", 3)]
    expected = bm25_rank(docs, "cat", 3)
    assert [g[0] for g in got] == [e[0] for e in expected]
    for (_, gs), (_, es) in zip(got, expected):
        assert gs == pytest.approx(es, abs=1e-12)


def test_zero_score_documents_excluded():
    index = TmIndex.build(tm({1: "cat sat", 2: "dog ran"}))
    matches = index.retrieve("cat", 10)
    assert [m.entry.id for m in matches] == [1]


def test_scores_non_increasing_and_ranks_contiguous():
    docs = {i: " ".join(random.Random(i).choices(["a", "b", "c", "d"], k=5))
            for i in range(1, 20)}
    index = TmIndex.build(tm(docs))
    matches = index.retrieve("a b", 10)
    assert [m.rank for m in matches] == list(range(1, len(matches) + 1))
    for first, second in zip(matches, matches[1:]):
        assert first.score >= second.score


def test_incremental_equals_rebuild():
    rng = random.Random(7)
    vocab = ["cat", "dog", "sat", "ran", "water", "burn", "check"]
    index = TmIndex()
    live = {}
    next_id = 1
    for _ in range(60):
        if live and rng.random() < 0.3:
            doc_id = rng.choice(list(live))
            del live[doc_id]
            index.delete(doc_id)
        else:
            if live and rng.random() < 0.2:
                doc_id = rng.choice(list(live))
            else:
                doc_id = next_id
                next_id += 1
            text = " ".join(rng.choices(vocab, k=rng.randint(1, 6)))
            live[doc_id] = text
            index.upsert(TmEntry(source_text=text, target_text="t", id=doc_id))
        rebuilt = TmIndex.build(
            [TmEntry(source_text=t, target_text="t", id=i) for i, t in live.items()])
        for query in ("cat", "water burn", "dog sat ran"):
            a = [(m.entry.id, m.score) for m in index.retrieve(query, 5)]
            b = [(m.entry.id, m.score) for m in rebuilt.retrieve(query, 5)]
            assert [x[0] for x in a] == [x[0] for x in b]
            for (_, sa), (_, sb) in zip(a, b):
                assert sa == pytest.approx(sb, abs=1e-12)


def test_delete_unknown_id_noop():
    index = TmIndex()
    index.delete(99)  # no error
    assert len(index) == 0


def test_upsert_then_self_retrieval():
    index = TmIndex.build(tm({1: "cat sat", 2: "dog ran"}))
    index.upsert(TmEntry(source_text="unique zebra phrase", target_text="t", id=3))
    matches = index.retrieve("unique zebra phrase", 3)
    assert matches[0].entry.id == 3


def test_score_monotonic_in_tf_fixed_length():
    # Same doc length, more query-term occurrences -> score not lower.
    docs_low = {1: "cat pad pad pad", 2: "x y z w"}
    docs_high = {1: "cat cat pad pad", 2: "x y z w"}
    low = bm25_rank(docs_low, "cat", 1)[0][1]
    high = bm25_rank(docs_high, "cat", 1)[0][1]
    index_low = TmIndex.build(tm(docs_low))
    index_high = TmIndex.build(tm(docs_high))
    assert index_low.retrieve("cat", 1)[0].score == pytest.approx(low)
    assert index_high.retrieve("cat", 1)[0].score == pytest.approx(high)
    assert high >= low


def test_params_validation():
    with pytest.raises(ValueError):
        Bm25Params(k1=0)
    with pytest.raises(ValueError):
        Bm25Params(b=1.5)
