"""Translate -> retrieve -> prompt -> post-edit orchestration.

Also owns the prompt layout (numbered glossary lines inside tagged blocks,
past-translation pairs, trailing "Text to translate:" section) and the
token-level diff that drives change highlighting.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import backends
from .backends import ChatMessage, MtRequest
from .errors import BackendError, ValidationError
from .retrieval import Bm25Params, GlossaryMatch, TmIndex, TmMatch, match_glossary
from .store import EngineConfig, Store, TmEntry
from .textproc import tokenize


@dataclass(frozen=True)
class PromptBundle:
    system_message: str
    user_message: str

    def messages(self, config: EngineConfig) -> list[ChatMessage]:
        msgs = [ChatMessage("system", self.system_message)]
        for user_text, assistant_text in config.llm_backend.few_shot_examples:
            msgs.append(ChatMessage("user", user_text))
            msgs.append(ChatMessage("assistant", assistant_text))
        msgs.append(ChatMessage("user", self.user_message))
        return msgs


def _substitute_langs(template: str, config: EngineConfig) -> str:
    return (template
            .replace("{SOURCE_LANG}", config.source_language_name)
            .replace("{TARGET_LANG}", config.target_language_name))


def build_prompt(config: EngineConfig, source_text: str, mt_text: str,
                 glossary_matches: list[GlossaryMatch],
                 tm_matches: list[TmMatch]) -> PromptBundle:
    src = config.source_language_name
    tgt = config.target_language_name
    lines = ["<glossary entries>"]
    for i, match in enumerate(glossary_matches):
        lines.append(f"no {i}: {match.entry.source_term} -> {match.entry.target_text}")
    lines.append("</glossary entries>")
    lines.append("")
    lines.append("<past translations>")
    for i, match in enumerate(tm_matches):
        if i > 0:
            lines.append("")
        lines.append(f"{src}: {match.entry.source_text}")
        lines.append(f"{tgt}: {match.entry.target_text}")
    lines.append("</past translations>")
    lines.append("")
    lines.append("Text to translate:")
    lines.append(f"{src}: {source_text}")
    lines.append(f"MT: {mt_text}")
    lines.append(f"{tgt}: ")
    return PromptBundle(
        system_message=_substitute_langs(config.llm_backend.system_prompt, config),
        user_message="\n".join(lines),
    )


def _lcs_keep(a: list[str], b: list[str]) -> tuple[set, set]:
    """Index sets of a longest common subsequence of a and b."""
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row, nxt = dp[i], dp[i + 1]
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                row[j] = nxt[j] if nxt[j] >= row[j + 1] else row[j + 1]
    keep_a: set = set()
    keep_b: set = set()
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            keep_a.add(i)
            keep_b.add(j)
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            j += 1
    return keep_a, keep_b


def _changed_spans(tokens, keep: set) -> list[tuple]:
    """Byte spans of non-LCS tokens, adjacent changed tokens merged."""
    spans = []
    run_start = None
    run_end = None
    prev_changed_idx = None
    for idx, tok in enumerate(tokens):
        if idx in keep:
            continue
        if prev_changed_idx is not None and idx == prev_changed_idx + 1:
            run_end = tok.end
        else:
            if run_start is not None:
                spans.append((run_start, run_end))
            run_start, run_end = tok.start, tok.end
        prev_changed_idx = idx
    if run_start is not None:
        spans.append((run_start, run_end))
    return spans


def diff_spans(before_text: str, after_text: str) -> tuple[list, list]:
    """Token-level LCS diff; returns (removed spans in before, added spans in after)."""
    before_tokens = tokenize(before_text)
    after_tokens = tokenize(after_text)
    keep_b, keep_a = _lcs_keep([t.surface for t in before_tokens],
                               [t.surface for t in after_tokens])
    return (_changed_spans(before_tokens, keep_b),
            _changed_spans(after_tokens, keep_a))


@dataclass
class TranslationResult:
    source_text: str
    mt_text: str
    post_edited_text: str
    glossary_matches: list = field(default_factory=list)
    tm_matches: list = field(default_factory=list)
    mt_diff_spans: list = field(default_factory=list)
    ape_diff_spans: list = field(default_factory=list)
    prompt_transcript: list = field(default_factory=list)  # list[ChatMessage]
    timings_ms: dict = field(default_factory=dict)
    degraded: bool = False
    error_detail: str = ""

    def to_dict(self) -> dict:
        return {
            "source_text": self.source_text,
            "mt_text": self.mt_text,
            "post_edited_text": self.post_edited_text,
            "glossary_matches": [m.to_dict() for m in self.glossary_matches],
            "tm_matches": [m.to_dict() for m in self.tm_matches],
            "mt_diff_spans": [list(s) for s in self.mt_diff_spans],
            "ape_diff_spans": [list(s) for s in self.ape_diff_spans],
            "prompt_transcript": [m.to_dict() for m in self.prompt_transcript],
            "timings_ms": dict(self.timings_ms),
            "degraded": self.degraded,
            "error_detail": self.error_detail,
        }


class Engine:
    """Shared wiring: store + live BM25 index + config-driven pipeline."""

    def __init__(self, store: Store, params: Bm25Params | None = None):
        self.store = store
        self.index = TmIndex.build(store.tm_entries(), params)
        store.add_tm_listener(self.index.apply)

    def mt_only(self, source_text: str) -> str:
        config = self.store.get_config()
        return backends.mt_translate(
            config.mt_backend,
            MtRequest(source_text, config.source_language_name,
                      config.target_language_name),
        ).translated_text

    def translate(self, source_text: str, mt_only: bool = False) -> TranslationResult:
        if not source_text or not source_text.strip():
            raise ValidationError("source_text must be non-empty")
        config = self.store.get_config()
        timings: dict = {}

        started = time.monotonic()
        mt_response = backends.mt_translate(
            config.mt_backend,
            MtRequest(source_text, config.source_language_name,
                      config.target_language_name),
        )
        timings["mt"] = int((time.monotonic() - started) * 1000)
        mt_text = mt_response.translated_text

        started = time.monotonic()
        glossary_matches = match_glossary(source_text, self.store.glossary_entries(),
                                          cap=config.glossary_injection_cap)
        tm_matches = self.index.retrieve(source_text, config.tm_retrieval_count)
        timings["retrieval"] = int((time.monotonic() - started) * 1000)

        bundle = build_prompt(config, source_text, mt_text, glossary_matches, tm_matches)
        messages = bundle.messages(config)

        degraded = False
        error_detail = ""
        transcript: list[ChatMessage] = []
        if mt_only:
            post_edited = mt_text
        else:
            started = time.monotonic()
            try:
                post_edited = backends.llm_chat(config.llm_backend, messages)
                transcript = messages
            except BackendError as exc:
                post_edited = mt_text
                degraded = True
                error_detail = str(exc)
            timings["llm"] = int((time.monotonic() - started) * 1000)

        started = time.monotonic()
        mt_spans, ape_spans = diff_spans(mt_text, post_edited)
        timings["diff"] = int((time.monotonic() - started) * 1000)

        return TranslationResult(
            source_text=source_text,
            mt_text=mt_text,
            post_edited_text=post_edited,
            glossary_matches=glossary_matches,
            tm_matches=tm_matches,
            mt_diff_spans=mt_spans,
            ape_diff_spans=ape_spans,
            prompt_transcript=transcript,
            timings_ms=timings,
            degraded=degraded,
            error_detail=error_detail,
        )

    def save_to_tm(self, result: TranslationResult) -> TmEntry:
        if not result.post_edited_text or not result.post_edited_text.strip():
            raise ValidationError("cannot save a translation with empty post-edited text")
        entry = TmEntry(source_text=result.source_text,
                        target_text=result.post_edited_text,
                        origin="saved_from_translation")
        return self.store.put_tm_entry(entry)
