"""HTTP surface for the explanation pipeline.

Three endpoints drive the explorer:

  - ``POST /queries`` runs a question (packaged fixture or inline upload)
    and returns the answers with stable ids.
  - ``GET /answers/{answer_id}/explanation`` produces one explanation on
    demand; results are cached per (answer, mode, level).
  - ``GET /fixtures`` lists the packaged examples for pickers.

Failures surface as ``{"code", "message", "stage"}`` JSON bodies so the
client can tell which part of the pipeline gave up.
"""

from __future__ import annotations

import hashlib
import json
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import InvalidParamsError, LookupFailedError, ProvExplainError
from .fixtures import Fixture, QueryFixture, list_fixtures, load_fixture
from .io import (
    parse_database,
    parse_mapping,
    parse_query,
    parse_schema,
    parse_tree_rows,
)
from .mapper import DEFAULT_BETA, map_words
from .pipeline import RunResult, execute, explanation

_STATUS_BY_CODE = {
    "LOOKUP_FAILED": 404,
    "INVALID_PARAMS": 400,
}


class InlineSpec(BaseModel):
    """A self-contained question: schema and tables as text, the question
    tree in tabular form, a datalog query, and either an explicit word
    mapping or a matcher threshold to derive one."""

    schema_text: str
    tables: dict[str, str]
    tree: str
    query: str
    question: Optional[str] = None
    mapping: Optional[list] = None
    beta: Optional[float] = None


class QueryBody(BaseModel):
    fixture: Optional[str] = None
    query: Optional[str] = None
    inline: Optional[InlineSpec] = None


def _staged(stage: str, exc: ProvExplainError) -> ProvExplainError:
    exc.stage = stage
    return exc


def _inline_run(spec: InlineSpec) -> tuple[Fixture, QueryFixture]:
    try:
        schema = parse_schema(spec.schema_text)
        database = parse_database(schema, spec.tables)
        tree = parse_tree_rows(spec.tree)
        query = parse_query(spec.query)
    except ProvExplainError as exc:
        raise _staged("parse", exc)
    try:
        if spec.mapping is not None:
            mapping = parse_mapping(spec.mapping)
        else:
            beta = DEFAULT_BETA if spec.beta is None else spec.beta
            mapping = map_words(tree, query, schema, beta=beta)
    except ProvExplainError as exc:
        raise _staged("mapping", exc)
    fixture = Fixture("inline", schema, database, ())
    question = spec.question or tree.sentence()
    return fixture, QueryFixture("inline", question, tree, query, mapping)


def create_app() -> FastAPI:
    app = FastAPI(title="provexplain")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    runs: dict[str, RunResult] = {}
    explanations: dict[tuple, dict] = {}

    @app.exception_handler(ProvExplainError)
    async def _on_error(request: Request, exc: ProvExplainError):
        return JSONResponse(
            status_code=_STATUS_BY_CODE.get(exc.code, 422),
            content={
                "code": exc.code,
                "message": str(exc),
                "stage": getattr(exc, "stage", "pipeline"),
            },
        )

    def _run_payload(run_id: str, result: RunResult) -> dict:
        payload = result.to_json()
        payload["run_id"] = run_id
        for report in payload["answers"]:
            report["id"] = f"{run_id}:{report['index']}"
        return payload

    @app.get("/fixtures")
    def fixtures_index() -> list:
        out = []
        for name in list_fixtures():
            fixture = load_fixture(name)
            out.append(
                {
                    "name": name,
                    "queries": [
                        {"name": q.name, "question": q.question}
                        for q in fixture.queries
                    ],
                    "relations": [
                        {"name": rel, "rows": len(rows)}
                        for rel, rows in fixture.database.tables.items()
                    ],
                }
            )
        return out

    @app.post("/queries")
    def post_query(body: QueryBody) -> dict:
        sources = [body.fixture is not None, body.inline is not None]
        if sum(sources) != 1:
            raise InvalidParamsError(
                "exactly one of 'fixture' or 'inline' must be given"
            )
        if body.fixture is not None:
            if body.query is None:
                raise InvalidParamsError("'query' names the fixture question")
            try:
                fixture = load_fixture(body.fixture)
                query_fixture = fixture.query(body.query)
            except ProvExplainError as exc:
                raise _staged("load", exc)
            run_id = f"{body.fixture}.{body.query}"
        else:
            fixture, query_fixture = _inline_run(body.inline)
            digest = hashlib.sha1(
                json.dumps(body.inline.model_dump(), sort_keys=True).encode()
            ).hexdigest()
            run_id = f"inline-{digest[:12]}"
        if run_id not in runs:
            try:
                runs[run_id] = execute(fixture, query_fixture)
            except ProvExplainError as exc:
                raise _staged("run", exc)
        return _run_payload(run_id, runs[run_id])

    @app.get("/answers/{answer_id}/explanation")
    def get_explanation(
        answer_id: str, mode: str, level: Optional[str] = None
    ) -> dict:
        run_id, _sep, index_text = answer_id.rpartition(":")
        if not run_id or not index_text.isdigit():
            raise LookupFailedError(f"malformed answer id {answer_id!r}")
        result = runs.get(run_id)
        if result is None:
            raise LookupFailedError(f"unknown run {run_id!r}; POST /queries first")
        key = (answer_id, mode, level)
        cached = explanations.get(key)
        if cached is None:
            try:
                cached = explanation(result, int(index_text), mode, level)
            except ProvExplainError as exc:
                raise _staged("explanation", exc)
            cached["answer_id"] = answer_id
            explanations[key] = cached
        return cached

    return app


app = create_app()
