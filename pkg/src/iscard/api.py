"""HTTP JSON API exposing the card-design engine.

All JSON responses are rendered through the canonical serializer, so
catalog and recommendation payloads are byte-stable for a fixed
configuration. Error envelope: ``{"code", "message", "details"?}`` with
422 for domain validation failures, 404 for missing resources, 400 for
malformed requests, and 413 for oversized uploads. Mutations validate
before persisting; a 4xx response never alters the store.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict, ValidationError

from . import cards, charts, recommender, tabular
from .cards import BindingSet, IdiomKind, TaskKind
from .catalog import MappingConfig, load_mapping_config
from .jsonutil import canonical_json_bytes
from .store import NotFound, ReferencedDataset, Store, StoreError
from .tabular import ColumnDef, ColumnType, DataTable, TableError


@dataclass
class AppConfig:
    data_dir: str | Path = "./iscard-data"
    mapping_config_path: str | Path | None = None
    max_upload_bytes: int = tabular.MAX_INGEST_BYTES
    cors_origins: tuple[str, ...] = ("*",)


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(content=canonical_json_bytes(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, code: str, message: str, details: Any = None) -> Response:
    body: dict[str, Any] = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return _json_response(body, status_code=status_code)


# -- request models ----------------------------------------------------------

class CreateCardRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str = ""


class CardPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str | None = None
    goal: str | None = None
    question: str | None = None
    task: str | None = None
    datasetId: str | None = None
    idiom: str | None = None
    bindings: dict[str, list[str]] | None = None


class GenerateColumn(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    type: str
    orderDictionary: list[str] | None = None


class GenerateTableRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    columns: list[GenerateColumn]
    rows: list[list[str]] = []


class ColumnPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")
    type: str
    orderDictionary: list[str] | None = None


class RecommendationRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    task: str | None = None
    datasetId: str | None = None


class PreviewRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    idiom: str
    datasetId: str
    bindings: dict[str, list[str]]
    title: str = ""


# -- catalog documents --------------------------------------------------------

def tasks_document(config: MappingConfig) -> list[dict]:
    return [
        {
            "task": t.task.value,
            "label": t.label,
            "description": t.description,
            "illustrationRef": config.task_illustrations.get(t.task, ""),
        }
        for t in config.tasks
    ]


def idioms_document(config: MappingConfig) -> list[dict]:
    out = []
    for entry in config.idioms:
        out.append({
            "idiom": entry.kind.value,
            "label": entry.label,
            "illustrationRef": entry.illustration_ref,
            "channels": [
                {
                    "name": ch.name,
                    "minColumns": ch.min_columns,
                    "maxColumns": ch.max_columns,
                    "admissibleTypes": [t.value for t in ch.admissible_types],
                    "required": ch.required,
                }
                for ch in entry.channels
            ],
        })
    return out


def dataset_document(dataset_id: str, table: DataTable) -> dict:
    return {"datasetId": dataset_id, "schema": tabular.schema_document(table)}


def _violations_document(violations) -> list[dict]:
    return [
        {"channel": v.channel, "rule": v.rule, "column": v.column, "message": v.message}
        for v in violations
    ]


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    mapping = load_mapping_config(config.mapping_config_path)
    store = Store(config.data_dir)

    app = FastAPI(title="iscard", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.mapping = mapping

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    # -- error mapping --------------------------------------------------------

    @app.exception_handler(RequestValidationError)
    async def malformed_request(_request: Request, exc: RequestValidationError) -> Response:
        return _error(400, "malformedRequest", "request body does not match the endpoint schema",
                      details=[{"loc": list(map(str, e["loc"])), "msg": e["msg"]} for e in exc.errors()])

    @app.exception_handler(TableError)
    async def table_error(_request: Request, exc: TableError) -> Response:
        status = {
            "tooLarge": 413,
            "incompatibleValues": 422,
            "orderDictionaryMissing": 422,
            "unknownColumn": 404,
        }.get(exc.code, 400)
        details = None
        if isinstance(exc, tabular.IncompatibleValues):
            details = {"column": exc.column, "cells": exc.cells}
        return _error(status, exc.code, str(exc), details)

    @app.exception_handler(StoreError)
    async def store_error(_request: Request, exc: StoreError) -> Response:
        status = {"notFound": 404, "referencedDataset": 409}.get(exc.code, 500)
        return _error(status, exc.code, str(exc))

    @app.exception_handler(recommender.UnknownTask)
    @app.exception_handler(recommender.UnknownIdiom)
    @app.exception_handler(recommender.NoInput)
    @app.exception_handler(cards.BindingError)
    async def bad_input(_request: Request, exc: Exception) -> Response:
        code = {
            recommender.UnknownTask: "unknownTask",
            recommender.UnknownIdiom: "unknownIdiom",
            recommender.NoInput: "noInput",
            cards.BindingError: "malformedBindings",
        }[type(exc)]
        return _error(400, code, str(exc))

    @app.exception_handler(charts.InvalidBinding)
    async def invalid_binding(_request: Request, exc: charts.InvalidBinding) -> Response:
        return _error(422, "invalidBinding", "bindings do not validate",
                      details=_violations_document(exc.violations))

    @app.exception_handler(charts.NegativePieValue)
    async def negative_pie(_request: Request, exc: charts.NegativePieValue) -> Response:
        return _error(422, "negativePieValue", str(exc))

    # -- catalogs ---------------------------------------------------------------

    @app.get("/api/tasks")
    async def get_tasks() -> Response:
        return _json_response(tasks_document(mapping))

    @app.get("/api/idioms")
    async def get_idioms() -> Response:
        return _json_response(idioms_document(mapping))

    # -- datasets ---------------------------------------------------------------

    @app.post("/api/datasets")
    async def create_dataset(request: Request) -> Response:
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            return _error(413, "tooLarge",
                          f"upload exceeds the {config.max_upload_bytes} byte limit")
        content_type = request.headers.get("content-type", "text/csv")
        content_type = content_type.split(";")[0].strip().lower()
        if content_type == "application/json":
            try:
                req = GenerateTableRequest.model_validate_json(body)
            except ValidationError as exc:
                return _error(400, "malformedRequest", "generate-table body is invalid",
                              details=[{"loc": list(map(str, e["loc"])), "msg": e["msg"]}
                                       for e in exc.errors()])
            try:
                columns = [
                    ColumnDef(
                        name=c.name,
                        type=ColumnType(c.type),
                        order_dictionary=tuple(c.orderDictionary) if c.orderDictionary else None,
                    )
                    for c in req.columns
                ]
            except ValueError:
                return _error(400, "unknownColumnType", "column type must be one of "
                              + ", ".join(t.value for t in ColumnType))
            table = tabular.generate_table(columns, req.rows)
            dataset_id = store.save_dataset(table)
        else:
            table = tabular.parse_csv(body)
            dataset_id = store.save_dataset(table, csv_bytes=body)
        return _json_response(dataset_document(dataset_id, table), status_code=201)

    @app.get("/api/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str) -> Response:
        table = store.load_dataset(dataset_id)
        doc = dataset_document(dataset_id, table)
        doc["rows"] = [list(row) for row in table.rows]
        return _json_response(doc)

    @app.patch("/api/datasets/{dataset_id}/columns/{column_name}")
    async def patch_column(dataset_id: str, column_name: str, patch: ColumnPatch) -> Response:
        table = store.load_dataset(dataset_id)
        try:
            ctype = ColumnType(patch.type)
        except ValueError:
            return _error(400, "unknownColumnType", f"unknown column type: {patch.type!r}")
        updated = tabular.set_column_type(table, column_name, ctype, patch.orderDictionary)
        store.update_dataset_schema(dataset_id, updated)
        return _json_response(dataset_document(dataset_id, updated))

    # -- recommendations ---------------------------------------------------------

    @app.post("/api/recommendations")
    async def recommendations(req: RecommendationRequest) -> Response:
        signature = None
        if req.datasetId is not None:
            table = store.load_dataset(req.datasetId)
            signature = tabular.data_signature(table)
        result = recommender.recommend(task=req.task, signature=signature, config=mapping)
        return _json_response(recommender.recommendations_document(result))

    # -- chart preview -------------------------------------------------------------

    @app.post("/api/preview")
    async def preview(req: PreviewRequest) -> Response:
        try:
            kind = IdiomKind(req.idiom)
        except ValueError:
            return _error(400, "unknownIdiom", f"unknown idiom: {req.idiom!r}")
        table = store.load_dataset(req.datasetId)
        bindings = BindingSet.of(req.bindings)
        spec = charts.build_chart_spec(kind, table, bindings, req.title, config=mapping)
        return _json_response(charts.chart_spec_document(spec))

    # -- indicator cards ------------------------------------------------------------

    def _resolve_table(card: cards.IndicatorCard) -> DataTable | None:
        if card.dataset_id is None or not store.dataset_exists(card.dataset_id):
            return None
        return store.load_dataset(card.dataset_id)

    def _card_response(card: cards.IndicatorCard, status_code: int = 200) -> Response:
        table = _resolve_table(card)
        completeness = cards.card_completeness(card, table=table, config=mapping)
        doc = cards.card_to_document(card)
        doc["status"] = completeness.status.value
        doc["missing"] = list(completeness.missing)
        return _json_response(doc, status_code=status_code)

    @app.post("/api/indicators")
    async def create_indicator(req: CreateCardRequest) -> Response:
        card = cards.create_card(req.name)
        store.save_card(card)
        return _card_response(card, status_code=201)

    @app.get("/api/indicators")
    async def list_indicators() -> Response:
        return _json_response([s.as_dict() for s in store.list_cards()])

    @app.get("/api/indicators/{card_id}")
    async def get_indicator(card_id: str) -> Response:
        return _card_response(store.load_card(card_id))

    @app.patch("/api/indicators/{card_id}")
    async def patch_indicator(card_id: str, patch: CardPatch) -> Response:
        card = store.load_card(card_id)
        provided = patch.model_fields_set

        changes: dict[str, Any] = {}
        if "name" in provided:
            changes["name"] = patch.name or ""
        if "goal" in provided:
            changes["goal"] = patch.goal or ""
        if "question" in provided:
            changes["question"] = patch.question or ""
        if "task" in provided:
            try:
                changes["task"] = TaskKind(patch.task) if patch.task is not None else None
            except ValueError:
                return _error(400, "unknownTask", f"unknown task: {patch.task!r}")
        if "idiom" in provided:
            try:
                changes["idiom"] = IdiomKind(patch.idiom) if patch.idiom is not None else None
            except ValueError:
                return _error(400, "unknownIdiom", f"unknown idiom: {patch.idiom!r}")
        if "datasetId" in provided:
            if patch.datasetId is not None and not store.dataset_exists(patch.datasetId):
                raise NotFound("dataset", patch.datasetId)
            changes["dataset_id"] = patch.datasetId
        if "bindings" in provided:
            changes["bindings"] = BindingSet.of(patch.bindings) if patch.bindings is not None else None

        dataset_id = changes.get("dataset_id", card.dataset_id)
        table = None
        if dataset_id is not None and store.dataset_exists(dataset_id):
            table = store.load_dataset(dataset_id)

        try:
            updated = cards.update_card(card, changes, table=table, config=mapping)
        except tabular.UnknownColumn as exc:
            return _error(422, "unknownColumn", str(exc))
        store.save_card(updated)
        return _card_response(updated)

    @app.delete("/api/indicators/{card_id}", status_code=204)
    async def delete_indicator(card_id: str) -> Response:
        store.delete_card(card_id)
        return Response(status_code=204)

    @app.delete("/api/datasets/{dataset_id}", status_code=204)
    async def delete_dataset(dataset_id: str) -> Response:
        store.delete_dataset(dataset_id)
        return Response(status_code=204)

    return app
