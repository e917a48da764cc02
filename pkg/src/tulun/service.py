"""JSON-over-HTTP API for translation, resources, config and evaluation.

Every response is either the declared JSON payload or the error envelope
``{"error": {"code", "message", "detail"?}}``. When the environment
variable ``TULUN_ADMIN_TOKEN`` is set, mutating endpoints require that
value as a bearer token; read endpoints stay open.
"""

from __future__ import annotations

import os
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (BackendError, NotFoundError, StorageError, TulunError,
                     ValidationError)
from .metrics import export_run_csv, lookup_reference, run_eval
from .pipeline import Engine
from .store import EvalRun, GlossaryEntry, Store, TmEntry

ADMIN_TOKEN_ENV = "TULUN_ADMIN_TOKEN"


class UnauthorizedError(TulunError):
    pass


def _error_response(code: str, message: str, status: int, detail=None) -> JSONResponse:
    body = {"error": {"code": code, "message": message}}
    if detail is not None:
        body["error"]["detail"] = detail
    return JSONResponse(body, status_code=status)


def _handle(exc: TulunError) -> JSONResponse:
    if isinstance(exc, ValidationError):
        return _error_response("validation", str(exc), 422)
    if isinstance(exc, NotFoundError):
        return _error_response("not_found", str(exc), 404)
    if isinstance(exc, UnauthorizedError):
        return _error_response("unauthorized", str(exc), 401)
    if isinstance(exc, BackendError):
        code = "backend_mt" if exc.kind == "mt" else "backend_llm"
        return _error_response(code, str(exc), 502, detail=exc.detail)
    if isinstance(exc, StorageError):
        return _error_response("storage", str(exc), 500)
    return _error_response("storage", str(exc), 500)


def _require_admin(request: Request) -> None:
    token = os.environ.get(ADMIN_TOKEN_ENV, "")
    if not token:
        return
    header = request.headers.get("authorization", "")
    if header != f"Bearer {token}":
        raise UnauthorizedError("admin token required")


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ValidationError("request body must be valid JSON") from None
    if not isinstance(body, dict):
        raise ValidationError("request body must be a JSON object")
    return body


def create_app(store: Store, engine: Engine | None = None) -> FastAPI:
    engine = engine or Engine(store)
    app = FastAPI(title="tulun", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("TULUN_CORS_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    # Eval runs execute one at a time; later requests queue behind the worker.
    eval_pool = ThreadPoolExecutor(max_workers=1)
    app.state.engine = engine
    app.state.eval_pool = eval_pool

    @app.exception_handler(TulunError)
    async def tulun_error_handler(request: Request, exc: TulunError):
        return _handle(exc)

    # -- translation -------------------------------------------------------

    @app.post("/api/translate")
    async def translate(request: Request):
        body = await _json_body(request)
        source_text = body.get("source_text", "")
        if not isinstance(source_text, str):
            raise ValidationError("source_text must be a string")
        result = engine.translate(source_text)
        payload = result.to_dict()
        hit = lookup_reference(source_text, store.eval_datasets())
        if hit is not None:
            dataset_id, item = hit
            payload["reference"] = {
                "dataset_id": dataset_id,
                "index": item.index,
                "reference_text": item.reference_text,
            }
        else:
            payload["reference"] = None
        return JSONResponse(payload)

    @app.post("/api/tm/save")
    async def tm_save(request: Request):
        _require_admin(request)
        body = await _json_body(request)
        entry = store.put_tm_entry(TmEntry(
            source_text=str(body.get("source_text", "")),
            target_text=str(body.get("target_text", "")),
            origin="saved_from_translation",
        ))
        return JSONResponse(asdict(entry))

    # -- glossary ----------------------------------------------------------

    @app.get("/api/glossary")
    async def glossary_list(request: Request):
        page, page_size, q = _list_params(request)
        entries = store.list_glossary(page, page_size, q)
        return JSONResponse({"items": [asdict(e) for e in entries],
                             "page": page, "page_size": page_size})

    @app.post("/api/glossary")
    async def glossary_put(request: Request):
        _require_admin(request)
        body = await _json_body(request)
        entry = store.put_glossary_entry(GlossaryEntry(
            source_term=str(body.get("source_term", "")),
            target_text=str(body.get("target_text", "")),
            id=body.get("id"),
        ))
        return JSONResponse(asdict(entry))

    @app.delete("/api/glossary/{entry_id}")
    async def glossary_delete(entry_id: int, request: Request):
        _require_admin(request)
        store.delete_glossary_entry(entry_id)
        return JSONResponse({"deleted": entry_id})

    @app.post("/api/glossary/import")
    async def glossary_import(request: Request):
        _require_admin(request)
        report = store.import_csv("glossary", await request.body())
        return JSONResponse(report.to_dict())

    # -- translation memory ------------------------------------------------

    @app.get("/api/tm")
    async def tm_list(request: Request):
        page, page_size, q = _list_params(request)
        entries = store.list_tm(page, page_size, q)
        return JSONResponse({"items": [asdict(e) for e in entries],
                             "page": page, "page_size": page_size})

    @app.post("/api/tm")
    async def tm_put(request: Request):
        _require_admin(request)
        body = await _json_body(request)
        entry = store.put_tm_entry(TmEntry(
            source_text=str(body.get("source_text", "")),
            target_text=str(body.get("target_text", "")),
            id=body.get("id"),
            origin=str(body.get("origin", "imported")),
        ))
        return JSONResponse(asdict(entry))

    @app.delete("/api/tm/{entry_id}")
    async def tm_delete(entry_id: int, request: Request):
        _require_admin(request)
        store.delete_tm_entry(entry_id)
        return JSONResponse({"deleted": entry_id})

    @app.post("/api/tm/import")
    async def tm_import(request: Request):
        _require_admin(request)
        report = store.import_csv("tm", await request.body())
        return JSONResponse(report.to_dict())

    # -- config ------------------------------------------------------------

    @app.get("/api/config")
    async def config_get():
        # Secrets never live in the config file; only env-var names appear.
        return JSONResponse(store.get_config().to_dict())

    @app.put("/api/config")
    async def config_put(request: Request):
        _require_admin(request)
        patch = await _json_body(request)
        return JSONResponse(store.update_config(patch).to_dict())

    # -- evaluation --------------------------------------------------------

    @app.post("/api/eval/datasets")
    async def eval_dataset_upload(request: Request):
        _require_admin(request)
        name = request.query_params.get("name", "uploaded")
        dataset = store.import_eval_csv(name, await request.body())
        return JSONResponse({"id": dataset.id, "name": dataset.name,
                             "item_count": len(dataset.items)})

    @app.get("/api/eval/datasets")
    async def eval_dataset_list():
        return JSONResponse({"items": [
            {"id": d.id, "name": d.name, "item_count": len(d.items),
             "created_at": d.created_at}
            for d in store.eval_datasets()
        ]})

    @app.get("/api/eval/datasets/{dataset_id}")
    async def eval_dataset_get(dataset_id: str):
        d = store.get_eval_dataset(dataset_id)
        return JSONResponse({"id": d.id, "name": d.name, "created_at": d.created_at,
                             "items": [asdict(item) for item in d.items]})

    @app.post("/api/eval/run")
    async def eval_run_start(request: Request):
        _require_admin(request)
        body = await _json_body(request)
        dataset = store.get_eval_dataset(str(body.get("dataset_id", "")))
        run_id = uuid.uuid4().hex[:12]
        store.save_run(EvalRun(id=run_id, dataset_id=dataset.id, status="running",
                               started_at=datetime.now(timezone.utc).isoformat()))
        eval_pool.submit(_run_eval_job, store, engine, dataset, run_id)
        return JSONResponse({"run_id": run_id}, status_code=202)

    @app.get("/api/eval/runs/{run_id}")
    async def eval_run_get(run_id: str):
        return JSONResponse(store.get_run(run_id).to_dict())

    @app.get("/api/eval/runs/{run_id}/export")
    async def eval_run_export(run_id: str):
        run = store.get_run(run_id)
        dataset = store.get_eval_dataset(run.dataset_id)
        return PlainTextResponse(export_run_csv(run, dataset), media_type="text/csv")

    return app


def _run_eval_job(store: Store, engine: Engine, dataset, run_id: str) -> None:
    try:
        run_eval(dataset, engine, run_id=run_id)
    except Exception as exc:  # the run record is the only failure channel
        store.save_run(EvalRun(id=run_id, dataset_id=dataset.id, status="failed",
                               finished_at=datetime.now(timezone.utc).isoformat()))


def _list_params(request: Request) -> tuple:
    try:
        page = int(request.query_params.get("page", "1"))
        page_size = int(request.query_params.get("page_size", "50"))
    except ValueError:
        raise ValidationError("page and page_size must be integers") from None
    return page, page_size, request.query_params.get("q") or None


def serve(store_dir: str, bind_addr: str = "127.0.0.1:8000") -> None:
    """Run the API server (blocking)."""
    import uvicorn

    store = Store(store_dir)
    store.get_config()  # fail fast on corrupt config
    app = create_app(store)
    host, _, port = bind_addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
