"""HTTP facade over the session store.

Endpoints
---------
POST /datasets                      multipart: table (CSV file) + schema (JSON field)
GET  /datasets/{id}/overview        small multiples for every feature
POST /sessions                      {dataset_id, target, instance}
POST /sessions/{id}/commands        {command, args}
GET  /sessions/{id}/payload         the full view payload
GET  /sessions/{id}/ranking?kind=   candidate-feature ranking

Errors are machine-readable ``{code, message, detail}`` bodies; unknown ids
map to 404, every other engine error to 400.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, File, Form, Query, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from .config import DEFAULT_CONFIG, EngineConfig
from .errors import (
    DatasetNotFoundError,
    FinchError,
    SessionNotFoundError,
    TargetError,
)
from .payload import build_overview, dump_payload, jsonable
from .session import SessionStore, make_instance
from .tabular import Dataset, TargetSpec, load_table, resolve_target


def _target_options(ds: Dataset) -> list[dict]:
    options: list[dict] = []
    labels = list(ds.predictions)
    if len(labels) == 1:
        options.append({"mode": "regression", "label": labels[0]})
    for label in labels:
        col = ds.predictions[label]
        if col.min() >= 0.0 and col.max() <= 1.0:
            options.append({"mode": "classification", "class_label": label})
    return options


def _feature_info(ds: Dataset) -> list[dict]:
    out = []
    for meta in ds.features:
        info = {
            "name": meta.name,
            "kind": meta.kind,
            "unique_count": meta.unique_count,
            "min": meta.vmin,
            "max": meta.vmax,
        }
        if meta.categories is not None:
            info["categories"] = list(meta.categories)
        out.append(info)
    return out


def _parse_instance_param(raw: str | None) -> dict | None:
    if raw is None or raw == "":
        return None
    try:
        return {"row": int(raw)}
    except ValueError:
        pass
    try:
        values = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise TargetError(
            f"instance must be a row index or a JSON object of feature values: {exc}"
        ) from None
    if not isinstance(values, dict):
        raise TargetError("instance JSON must be an object of feature values")
    return {"values": values}


def _resolve_for_overview(ds: Dataset, class_label: str | None):
    if class_label is not None:
        return resolve_target(ds, TargetSpec(mode="classification", class_label=class_label))
    labels = list(ds.predictions)
    if len(labels) == 1:
        return resolve_target(ds, TargetSpec(mode="regression"))
    raise TargetError(
        f"dataset has multiple prediction columns; pass class_label= (one of {labels})",
        detail={"candidates": labels},
    )


def create_app(store: SessionStore | None = None, config: EngineConfig | None = None) -> FastAPI:
    cfg = config or DEFAULT_CONFIG
    store = store or SessionStore(cfg)
    app = FastAPI(title="finch", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(FinchError)
    async def finch_error_handler(request: Request, exc: FinchError):
        status = 404 if isinstance(exc, (DatasetNotFoundError, SessionNotFoundError)) else 400
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": exc.message, "detail": jsonable(exc.detail)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "message": "request body or parameters are malformed",
                "detail": {"errors": jsonable(exc.errors())},
            },
        )

    @app.get("/")
    def index():
        return {
            "service": "finch",
            "endpoints": [
                "POST /datasets",
                "GET /datasets/{dataset_id}/overview",
                "POST /sessions",
                "POST /sessions/{session_id}/commands",
                "GET /sessions/{session_id}/payload",
                "GET /sessions/{session_id}/ranking",
            ],
            "datasets": store.dataset_ids(),
        }

    @app.post("/datasets")
    async def upload_dataset(
        table: UploadFile = File(...),
        schema_field: str = Form(..., alias="schema"),
    ):
        try:
            roles = json.loads(schema_field)
        except json.JSONDecodeError as exc:
            return JSONResponse(
                status_code=400,
                content={
                    "code": "schema_error",
                    "message": f"schema field is not valid JSON: {exc}",
                    "detail": {},
                },
            )
        data = await table.read()
        ds = load_table(data, roles, cfg)
        dataset_id = store.add_dataset(ds)
        return {
            "dataset_id": dataset_id,
            "features": _feature_info(ds),
            "target_options": _target_options(ds),
            "n_rows": ds.n_rows,
            "n_dropped": ds.n_dropped,
            "has_truth": ds.truth is not None,
        }

    @app.get("/datasets/{dataset_id}/overview")
    def overview(
        dataset_id: str,
        instance: str | None = Query(default=None),
        class_label: str | None = Query(default=None),
        smoothing: bool = Query(default=True),
    ):
        ds = store.dataset(dataset_id)
        target = _resolve_for_overview(ds, class_label)
        inst = make_instance(ds, _parse_instance_param(instance))
        doc = build_overview(ds, target, inst, smoothing=smoothing, config=cfg)
        return Response(content=dump_payload(doc), media_type="application/json")

    @app.post("/sessions")
    def create_session(body: dict):
        dataset_id = str(body.get("dataset_id", ""))
        target_raw = body.get("target") or {}
        spec = TargetSpec(
            mode=str(target_raw.get("mode", "regression")),
            class_label=target_raw.get("class_label"),
            display_name=str(target_raw.get("display_name", "")),
        )
        session = store.create_session(dataset_id, spec, body.get("instance"))
        return {"session_id": session.id, "state": store.summary(session.id)}

    @app.post("/sessions/{session_id}/commands")
    def run_command(session_id: str, body: dict):
        command = str(body.get("command", ""))
        args = body.get("args") or {}
        return store.mutate_session(session_id, command, args)

    @app.get("/sessions/{session_id}/payload")
    def payload(session_id: str):
        return Response(content=store.payload_bytes(session_id), media_type="application/json")

    @app.get("/sessions/{session_id}/ranking")
    def ranking(session_id: str, kind: str | None = Query(default=None)):
        doc = store.ranking(session_id, kind)
        return Response(content=dump_payload(doc), media_type="application/json")

    return app
