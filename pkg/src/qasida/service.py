"""Stateless HTTP JSON service over the analysis engine.

Endpoints (all under /v1): POST /analyze, POST /scan, GET /meters,
GET /health. Malformed request bodies return 400; domain failures
(scansion, validation) return 422 with a structured error. Analysis
responses are the same canonical bytes the CLI emits with --json.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import api, meterdb
from .errors import QasidaError
from .scansion import MIN_COVERAGE


class AnalyzeRequest(BaseModel):
    text: str
    meter_hint: int | None = None


class ScanRequest(BaseModel):
    text: str


def _canonical_response(payload) -> Response:
    return Response(
        content=api.canonical_json(payload), media_type="application/json"
    )


def create_app(db: meterdb.PatternDB | None = None) -> FastAPI:
    """Build the service around one immutable pattern database."""
    if db is None:
        path = os.environ.get("QASIDA_DB")
        db = meterdb.load(path) if path else meterdb.load()

    app = FastAPI(title="qasida", version="1.0.0", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "error": {
                    "type": "MalformedRequest",
                    "message": str(exc.errors()[:1]),
                }
            },
        )

    @app.exception_handler(QasidaError)
    async def _domain_error(request: Request, exc: QasidaError):
        return JSONResponse(
            status_code=422,
            content={
                "error": {"type": type(exc).__name__, "message": str(exc)}
            },
        )

    @app.post("/v1/analyze")
    def analyze(body: AnalyzeRequest) -> Response:
        report = api.analyze(
            body.text, db, meter_hint=body.meter_hint, min_coverage=MIN_COVERAGE
        )
        return _canonical_response(report)

    @app.post("/v1/scan")
    def scan(body: ScanRequest) -> Response:
        return _canonical_response(api.scan(body.text))

    @app.get("/v1/meters")
    def meters() -> Response:
        return _canonical_response(api.meters(db))

    @app.get("/v1/health")
    def health() -> Response:
        return _canonical_response(
            {"status": "ok", "meters": meterdb.METER_COUNT, "db_checksum": db.checksum}
        )

    return app


app = create_app()
