"""Regenerates the directional eval fixture.

Twenty synthetic sentences in an invented target language. The mock MT
mapping produces drafts with one or two deliberate terminology errors per
sentence (each covered by a glossary entry); the scripted mock LLM
replacement table corrects exactly those. A third of the drafts also carry
an extra trailing word the post-editor never removes, so the corrected
corpus stays below 100. Expected corpus scores are computed with the
brute-force oracle in tests/oracles.py and frozen into expected.json.

Run from the repository root:  python3 tests/fixtures/directional/generate.py
"""

import csv
import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent.parent))

from oracles import chrf_corpus  # noqa: E402

TERMS = [
    ("water", "wotara", "aguava"),
    ("burn", "keimasu", "fairema"),
    ("clinic", "klinika", "ospitao"),
    ("bandage", "faxamol", "tissumi"),
    ("fever", "isinmanas", "hotbodi"),
    ("medicine", "aimoruk", "drogasan"),
    ("wound", "kanekra", "hurtpleis"),
    ("nurse", "enfermira", "sikhelpa"),
    ("village", "sukulau", "taonsmol"),
    ("rice", "foslau", "raisgren"),
]


def build():
    rows = []
    for i in range(20):
        en_a, tgt_a, wrong_a = TERMS[i % 10]
        source = f"The {en_a} report number {i} was reviewed today."
        reference = f"Relatoriu {tgt_a} numeru {i} mak haree tiha ona ohin."
        draft = reference.replace(tgt_a, wrong_a)
        if i % 2 == 1:
            en_b, tgt_b, wrong_b = TERMS[(i + 4) % 10]
            source = f"The {en_a} and the {en_b} in report {i} were reviewed today."
            reference = f"Relatoriu {i} kona-ba {tgt_a} ho {tgt_b} mak haree tiha ona ohin."
            draft = reference.replace(tgt_a, wrong_a).replace(tgt_b, wrong_b)
        if i % 3 == 0:
            draft = draft + " ekstra"
        rows.append((source, reference, draft))
    return rows


def main():
    rows = build()
    with (HERE / "dataset.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source_text", "reference_text"])
        for source, reference, _ in rows:
            writer.writerow([source, reference])

    store = HERE / "store"
    store.mkdir(exist_ok=True)
    stamp = "2026-01-01T00:00:00+00:00"
    with (store / "glossary.jsonl").open("w", encoding="utf-8") as fh:
        for idx, (en, tgt, _) in enumerate(TERMS, 1):
            fh.write(json.dumps({
                "source_term": en, "target_text": tgt, "id": idx,
                "created_at": stamp, "updated_at": stamp,
            }, ensure_ascii=False) + "\n")
    (store / "tm.jsonl").write_text("", encoding="utf-8")

    replacements = {wrong: tgt for _, tgt, wrong in TERMS}
    config = {
        "site_title": "Directional fixture",
        "source_language_name": "English",
        "target_language_name": "Tetun",
        "mt_backend": {
            "kind": "mock",
            "endpoint_url": "",
            "auth_token_env": "TULUN_MT_TOKEN",
            "extra_params": {source: draft for source, _, draft in rows},
        },
        "llm_backend": {
            "kind": "mock",
            "endpoint_url": "",
            "model_id": "",
            "auth_token_env": "TULUN_LLM_TOKEN",
            "system_prompt": "Correct the draft translation from {SOURCE_LANG} to {TARGET_LANG}.",
            "few_shot_examples": [],
            "temperature": 0.0,
            "max_output_tokens": 1024,
            "mock_replacements": replacements,
        },
        "tm_retrieval_count": 3,
        "glossary_injection_cap": 0,
    }
    (store / "config.json").write_text(
        json.dumps(config, ensure_ascii=False, indent=2), encoding="utf-8")

    mt_pairs = [(draft, reference) for _, reference, draft in rows]
    ape_outputs = []
    for _, reference, draft in rows:
        fixed = draft
        for wrong, right in replacements.items():
            fixed = fixed.replace(wrong, right)
        ape_outputs.append(fixed)
    ape_pairs = [(ape, reference) for ape, (_, reference, _) in zip(ape_outputs, rows)]

    expected = {
        "corpus_chrfpp_mt": chrf_corpus(mt_pairs),
        "corpus_chrfpp_ape": chrf_corpus(ape_pairs),
    }
    assert expected["corpus_chrfpp_ape"] - expected["corpus_chrfpp_mt"] >= 5.0, expected
    (HERE / "expected.json").write_text(
        json.dumps(expected, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(expected, indent=2))


if __name__ == "__main__":
    main()
