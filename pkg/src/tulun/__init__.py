"""Terminology-aware machine translation post-editing engine."""

from .errors import (BackendError, NotFoundError, StorageError, TulunError,
                     ValidationError)
from .pipeline import Engine, TranslationResult, build_prompt, diff_spans
from .retrieval import Bm25Params, GlossaryMatch, TmIndex, TmMatch, match_glossary
from .store import (EngineConfig, EvalDataset, EvalItem, EvalRun, GlossaryEntry,
                    ImportReport, LlmBackendConfig, MtBackendConfig, Store, TmEntry)
from .metrics import ChrfParams, chrfpp_corpus, chrfpp_sentence, lookup_reference, run_eval

__version__ = "0.1.0"
