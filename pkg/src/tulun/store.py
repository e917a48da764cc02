"""Persistent domain store: glossary, translation memory, config, eval data.

Layout of the store directory:

    glossary.jsonl      one glossary entry per line
    tm.jsonl            one translation-memory entry per line
    config.json         engine configuration
    eval/<id>.jsonl     meta line followed by one eval item per line
    runs/<id>.json      one evaluation run per file

Record files are append-friendly: puts append a line (last write for an
id wins on reload), deletes trigger a compaction rewritten atomically via
temp-file rename. Many readers, single writer per store; a process-local
lock serializes mutations and makes each one atomically visible.
"""

from __future__ import annotations

import csv
import io
import json
import os
import threading
import uuid
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from .errors import NotFoundError, StorageError, ValidationError
from .textproc import normalized_tokens


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# Domain types


@dataclass
class GlossaryEntry:
    source_term: str
    target_text: str
    id: Optional[int] = None
    created_at: str = ""
    updated_at: str = ""

    def validate(self) -> None:
        if not self.source_term or not self.source_term.strip():
            raise ValidationError("glossary entry: empty source_term")
        if not self.target_text or not self.target_text.strip():
            raise ValidationError("glossary entry: empty target_text")


@dataclass
class TmEntry:
    source_text: str
    target_text: str
    id: Optional[int] = None
    origin: str = "imported"  # imported | saved_from_translation
    created_at: str = ""

    def validate(self) -> None:
        if not self.source_text or not self.source_text.strip():
            raise ValidationError("tm entry: empty source_text")
        if not self.target_text or not self.target_text.strip():
            raise ValidationError("tm entry: empty target_text")
        if self.origin not in ("imported", "saved_from_translation"):
            raise ValidationError(f"tm entry: unknown origin {self.origin!r}")


DEFAULT_SYSTEM_PROMPT = (
    "You are an expert translator. I am going to give you relevant glossary "
    "entries, and relevant past translations, where the first is the "
    "{SOURCE_LANG} source, and the second is the {TARGET_LANG} reference "
    "translation. The sentences will be written\n"
    "{SOURCE_LANG}: <sentence>\n"
    "{TARGET_LANG}: <translated sentence>.\n"
    "\n"
    "After the example pairs, I am going to provide another sentence in "
    "{SOURCE_LANG} and its machine translation, and I want you to translate "
    "it into {TARGET_LANG}. Give only the translation, and no extra "
    "commentary, formatting, or chattiness. Translate the text from "
    "{SOURCE_LANG} to {TARGET_LANG}."
)


@dataclass
class MtBackendConfig:
    kind: str = "mock"  # http_remote | mock | passthrough
    endpoint_url: str = ""
    auth_token_env: str = "TULUN_MT_TOKEN"
    extra_params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in ("http_remote", "mock", "passthrough"):
            raise ValidationError(f"mt_backend: unknown kind {self.kind!r}")
        if self.kind == "http_remote" and not self.endpoint_url:
            raise ValidationError("mt_backend: endpoint_url required for http_remote")
        if self.kind != "http_remote" and self.endpoint_url:
            raise ValidationError("mt_backend: endpoint_url only valid for http_remote")


@dataclass
class LlmBackendConfig:
    kind: str = "mock"  # chat_http | mock
    endpoint_url: str = ""
    model_id: str = ""
    auth_token_env: str = "TULUN_LLM_TOKEN"
    system_prompt: str = DEFAULT_SYSTEM_PROMPT
    few_shot_examples: list = field(default_factory=list)  # [[user, assistant], ...]
    temperature: float = 0.0
    max_output_tokens: int = 1024
    # Mock-only: substring replacements applied to the echoed MT draft,
    # letting tests and offline demos script deterministic post-edits.
    mock_replacements: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in ("chat_http", "mock"):
            raise ValidationError(f"llm_backend: unknown kind {self.kind!r}")
        if self.kind == "chat_http" and not self.system_prompt:
            raise ValidationError("llm_backend: system_prompt required for chat_http")
        if self.temperature < 0:
            raise ValidationError("llm_backend: temperature must be >= 0")
        if self.max_output_tokens <= 0:
            raise ValidationError("llm_backend: max_output_tokens must be > 0")
        for pair in self.few_shot_examples:
            if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
                raise ValidationError("llm_backend: few_shot_examples must be (user, assistant) pairs")


@dataclass
class EngineConfig:
    site_title: str = "Tulun"
    source_language_name: str = "English"
    target_language_name: str = "Tetun"
    mt_backend: MtBackendConfig = field(default_factory=MtBackendConfig)
    llm_backend: LlmBackendConfig = field(default_factory=LlmBackendConfig)
    tm_retrieval_count: int = 3
    glossary_injection_cap: int = 0  # 0 = unlimited

    def validate(self) -> None:
        if self.tm_retrieval_count < 0:
            raise ValidationError("tm_retrieval_count must be >= 0")
        if self.glossary_injection_cap < 0:
            raise ValidationError("glossary_injection_cap must be >= 0")
        if not self.target_language_name:
            raise ValidationError("target_language_name must be non-empty")
        self.mt_backend.validate()
        self.llm_backend.validate()

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        data = dict(data)
        mt = data.pop("mt_backend", {}) or {}
        llm = data.pop("llm_backend", {}) or {}
        cfg = cls(
            mt_backend=MtBackendConfig(**mt),
            llm_backend=LlmBackendConfig(**llm),
            **data,
        )
        return cfg


@dataclass
class EvalItem:
    index: int
    source_text: str
    reference_text: str

    def validate(self) -> None:
        if self.index < 0:
            raise ValidationError("eval item: negative index")
        if not self.source_text.strip() or not self.reference_text.strip():
            raise ValidationError("eval item: empty text")


@dataclass
class EvalDataset:
    id: str
    name: str
    items: list  # list[EvalItem]
    created_at: str = ""

    def validate(self) -> None:
        for i, item in enumerate(self.items):
            item.validate()
            if item.index != i:
                raise ValidationError("eval dataset: indices must be contiguous from 0")


@dataclass
class EvalRunItem:
    index: int
    mt_output: str = ""
    post_edited_output: str = ""
    chrfpp_mt: float = 0.0
    chrfpp_ape: float = 0.0
    error: str = ""  # non-empty marks a failed item


@dataclass
class EvalRun:
    id: str
    dataset_id: str
    status: str = "running"  # running | done | failed
    per_item: list = field(default_factory=list)  # list[EvalRunItem]
    corpus_chrfpp_mt: float = 0.0
    corpus_chrfpp_ape: float = 0.0
    failed_items: int = 0
    started_at: str = ""
    finished_at: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ImportReport:
    inserted: int = 0
    rejected: list = field(default_factory=list)  # [(line_no, reason)]
    warnings: list = field(default_factory=list)  # [(line_no, reason)]

    def to_dict(self) -> dict:
        return {
            "inserted": self.inserted,
            "rejected": [list(r) for r in self.rejected],
            "warnings": [list(w) for w in self.warnings],
        }


# ---------------------------------------------------------------------------
# Store


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


class Store:
    """Durable store for all domain collections, safe to share across handlers."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "eval").mkdir(exist_ok=True)
        (self.root / "runs").mkdir(exist_ok=True)
        self._lock = threading.RLock()
        self._glossary: dict[int, GlossaryEntry] = {}
        self._tm: dict[int, TmEntry] = {}
        self._datasets: dict[str, EvalDataset] = {}
        self._runs: dict[str, EvalRun] = {}
        self._next_glossary_id = 1
        self._next_tm_id = 1
        self._tm_listeners: list[Callable] = []
        self._load()

    # -- loading -----------------------------------------------------------

    def _load(self) -> None:
        self._glossary = {}
        for rec in self._read_jsonl(self.root / "glossary.jsonl"):
            entry = GlossaryEntry(**rec)
            self._glossary[entry.id] = entry
        self._tm = {}
        for rec in self._read_jsonl(self.root / "tm.jsonl"):
            entry = TmEntry(**rec)
            self._tm[entry.id] = entry
        self._next_glossary_id = max(self._glossary, default=0) + 1
        self._next_tm_id = max(self._tm, default=0) + 1
        for path in sorted((self.root / "eval").glob("*.jsonl")):
            ds = self._read_dataset(path)
            self._datasets[ds.id] = ds
        for path in sorted((self.root / "runs").glob("*.json")):
            rec = json.loads(path.read_text(encoding="utf-8"))
            rec["per_item"] = [EvalRunItem(**it) for it in rec.get("per_item", [])]
            self._runs[rec["id"]] = EvalRun(**rec)

    def _read_jsonl(self, path: Path):
        if not path.exists():
            return
        for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise StorageError(f"{path.name}:{line_no}: corrupt record: {line!r}") from exc

    def _read_dataset(self, path: Path) -> EvalDataset:
        lines = list(self._read_jsonl(path))
        if not lines:
            raise StorageError(f"{path.name}: empty dataset file")
        meta = lines[0]
        items = [EvalItem(**rec) for rec in lines[1:]]
        return EvalDataset(id=meta["id"], name=meta["name"], items=items,
                           created_at=meta.get("created_at", ""))

    # -- persistence helpers ----------------------------------------------

    def _append(self, filename: str, records: list[dict]) -> None:
        path = self.root / filename
        with path.open("a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _compact_glossary(self) -> None:
        data = "".join(
            json.dumps(asdict(e), ensure_ascii=False) + "\n"
            for e in sorted(self._glossary.values(), key=lambda e: e.id)
        )
        _atomic_write(self.root / "glossary.jsonl", data)

    def _compact_tm(self) -> None:
        data = "".join(
            json.dumps(asdict(e), ensure_ascii=False) + "\n"
            for e in sorted(self._tm.values(), key=lambda e: e.id)
        )
        _atomic_write(self.root / "tm.jsonl", data)

    # -- glossary ----------------------------------------------------------

    def put_glossary_entry(self, entry: GlossaryEntry) -> GlossaryEntry:
        entry.validate()
        with self._lock:
            now = _utcnow()
            if entry.id is None:
                entry.id = self._next_glossary_id
                self._next_glossary_id += 1
            else:
                self._next_glossary_id = max(self._next_glossary_id, entry.id + 1)
            existing = self._glossary.get(entry.id)
            entry.created_at = existing.created_at if existing else (entry.created_at or now)
            entry.updated_at = now
            self._glossary[entry.id] = entry
            self._append("glossary.jsonl", [asdict(entry)])
            return entry

    def delete_glossary_entry(self, entry_id: int) -> None:
        with self._lock:
            if entry_id not in self._glossary:
                raise NotFoundError(f"glossary entry {entry_id} not found")
            del self._glossary[entry_id]
            self._compact_glossary()

    def glossary_entries(self) -> list[GlossaryEntry]:
        with self._lock:
            return list(self._glossary.values())

    def get_glossary_entry(self, entry_id: int) -> GlossaryEntry:
        with self._lock:
            try:
                return self._glossary[entry_id]
            except KeyError:
                raise NotFoundError(f"glossary entry {entry_id} not found") from None

    def list_glossary(self, page: int = 1, page_size: int = 50,
                      query_substring: str | None = None) -> list[GlossaryEntry]:
        with self._lock:
            entries = list(self._glossary.values())
        if query_substring:
            q = query_substring.casefold()
            entries = [
                e for e in entries
                if q in e.source_term.casefold() or q in e.target_text.casefold()
            ]
        entries.sort(key=lambda e: (e.updated_at, -e.id), reverse=True)
        return _page(entries, page, page_size)

    # -- translation memory ------------------------------------------------

    def add_tm_listener(self, fn: Callable) -> None:
        """fn(op, entry_or_id) with op in {"upsert", "delete"}; called under the
        write lock so index updates are visible before the mutation returns."""
        self._tm_listeners.append(fn)

    def put_tm_entry(self, entry: TmEntry) -> TmEntry:
        entry.validate()
        with self._lock:
            if entry.id is None:
                entry.id = self._next_tm_id
                self._next_tm_id += 1
            else:
                self._next_tm_id = max(self._next_tm_id, entry.id + 1)
            entry.created_at = entry.created_at or _utcnow()
            self._tm[entry.id] = entry
            self._append("tm.jsonl", [asdict(entry)])
            for fn in self._tm_listeners:
                fn("upsert", entry)
            return entry

    def delete_tm_entry(self, entry_id: int) -> None:
        with self._lock:
            if entry_id not in self._tm:
                raise NotFoundError(f"tm entry {entry_id} not found")
            del self._tm[entry_id]
            self._compact_tm()
            for fn in self._tm_listeners:
                fn("delete", entry_id)

    def tm_entries(self) -> list[TmEntry]:
        with self._lock:
            return list(self._tm.values())

    def get_tm_entry(self, entry_id: int) -> TmEntry:
        with self._lock:
            try:
                return self._tm[entry_id]
            except KeyError:
                raise NotFoundError(f"tm entry {entry_id} not found") from None

    def list_tm(self, page: int = 1, page_size: int = 50,
                query_substring: str | None = None) -> list[TmEntry]:
        with self._lock:
            entries = list(self._tm.values())
        if query_substring:
            q = query_substring.casefold()
            entries = [
                e for e in entries
                if q in e.source_text.casefold() or q in e.target_text.casefold()
            ]
        entries.sort(key=lambda e: (e.created_at, -e.id), reverse=True)
        return _page(entries, page, page_size)

    # -- CSV import --------------------------------------------------------

    def import_csv(self, kind: str, payload: bytes) -> ImportReport:
        if kind not in ("glossary", "tm"):
            raise ValidationError(f"unknown import kind {kind!r}")
        try:
            text = payload.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ValidationError("CSV payload is not valid UTF-8") from exc
        required = ("source_term", "target_text") if kind == "glossary" else ("source_text", "target_text")
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None:
            raise ValidationError("CSV payload is empty")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise ValidationError(f"CSV missing required columns: {', '.join(missing)}")

        report = ImportReport()
        accepted = []
        for line_no, row in enumerate(reader, 2):
            a = (row.get(required[0]) or "").strip()
            b = (row.get(required[1]) or "").strip()
            if not a:
                report.rejected.append((line_no, f"empty {required[0]}"))
                continue
            if not b:
                report.rejected.append((line_no, f"empty {required[1]}"))
                continue
            if kind == "glossary" and len(normalized_tokens(a)) > 2:
                report.warnings.append(
                    (line_no, "unreachable by matcher (source term longer than 2 tokens)")
                )
            accepted.append((a, b))

        # Single locked batch: readers see pre- or post-import state only.
        with self._lock:
            now = _utcnow()
            records = []
            for a, b in accepted:
                if kind == "glossary":
                    entry = GlossaryEntry(source_term=a, target_text=b,
                                          id=self._next_glossary_id,
                                          created_at=now, updated_at=now)
                    self._next_glossary_id += 1
                    self._glossary[entry.id] = entry
                else:
                    entry = TmEntry(source_text=a, target_text=b,
                                    id=self._next_tm_id, origin="imported",
                                    created_at=now)
                    self._next_tm_id += 1
                    self._tm[entry.id] = entry
                records.append(asdict(entry))
            if records:
                self._append("glossary.jsonl" if kind == "glossary" else "tm.jsonl", records)
            if kind == "tm":
                for rec in records:
                    entry = self._tm[rec["id"]]
                    for fn in self._tm_listeners:
                        fn("upsert", entry)
            report.inserted = len(records)
        return report

    # -- config ------------------------------------------------------------

    def get_config(self) -> EngineConfig:
        with self._lock:
            path = self.root / "config.json"
            if not path.exists():
                cfg = EngineConfig()
                _atomic_write(path, json.dumps(cfg.to_dict(), ensure_ascii=False, indent=2))
                return cfg
            return EngineConfig.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def update_config(self, patch: dict) -> EngineConfig:
        with self._lock:
            current = self.get_config().to_dict()
            merged = _deep_merge(current, patch)
            cfg = EngineConfig.from_dict(merged)
            cfg.validate()
            _atomic_write(self.root / "config.json",
                          json.dumps(cfg.to_dict(), ensure_ascii=False, indent=2))
            return cfg

    def set_config(self, cfg: EngineConfig) -> EngineConfig:
        cfg.validate()
        with self._lock:
            _atomic_write(self.root / "config.json",
                          json.dumps(cfg.to_dict(), ensure_ascii=False, indent=2))
            return cfg

    # -- eval datasets and runs -------------------------------------------

    def put_eval_dataset(self, name: str, items: list[EvalItem],
                         dataset_id: str | None = None) -> EvalDataset:
        ds = EvalDataset(id=dataset_id or uuid.uuid4().hex[:12], name=name,
                         items=items, created_at=_utcnow())
        ds.validate()
        with self._lock:
            lines = [json.dumps({"id": ds.id, "name": ds.name, "created_at": ds.created_at},
                                ensure_ascii=False)]
            lines += [json.dumps(asdict(it), ensure_ascii=False) for it in ds.items]
            _atomic_write(self.root / "eval" / f"{ds.id}.jsonl", "\n".join(lines) + "\n")
            self._datasets[ds.id] = ds
            return ds

    def import_eval_csv(self, name: str, payload: bytes) -> EvalDataset:
        try:
            text = payload.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ValidationError("CSV payload is not valid UTF-8") from exc
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or not {"source_text", "reference_text"} <= set(reader.fieldnames):
            raise ValidationError("eval CSV must have columns source_text,reference_text")
        items = []
        for row in reader:
            src = (row.get("source_text") or "").strip()
            ref = (row.get("reference_text") or "").strip()
            if not src or not ref:
                continue
            items.append(EvalItem(index=len(items), source_text=src, reference_text=ref))
        if not items:
            raise ValidationError("eval CSV contains no usable rows")
        return self.put_eval_dataset(name, items)

    def eval_datasets(self) -> list[EvalDataset]:
        """Datasets in creation order."""
        with self._lock:
            return sorted(self._datasets.values(), key=lambda d: (d.created_at, d.id))

    def get_eval_dataset(self, dataset_id: str) -> EvalDataset:
        with self._lock:
            try:
                return self._datasets[dataset_id]
            except KeyError:
                raise NotFoundError(f"eval dataset {dataset_id} not found") from None

    def save_run(self, run: EvalRun) -> EvalRun:
        with self._lock:
            _atomic_write(self.root / "runs" / f"{run.id}.json",
                          json.dumps(run.to_dict(), ensure_ascii=False, indent=2))
            self._runs[run.id] = run
            return run

    def get_run(self, run_id: str) -> EvalRun:
        with self._lock:
            try:
                return self._runs[run_id]
            except KeyError:
                raise NotFoundError(f"eval run {run_id} not found") from None


def _page(items: list, page: int, page_size: int) -> list:
    if page < 1 or page_size < 1:
        raise ValidationError("page and page_size must be >= 1")
    start = (page - 1) * page_size
    return items[start : start + page_size]


def _deep_merge(base: dict, patch: dict) -> dict:
    out = dict(base)
    for key, value in patch.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out
