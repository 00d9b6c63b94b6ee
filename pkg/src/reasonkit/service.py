"""HTTP service exposing explanation, compilation and verification.

Requests carry model documents inline, so the service itself is
stateless; parsed models are cached by document content.  Every endpoint
wraps the core package and maps its error classes onto HTTP statuses:
400 input errors, 409 classifier-integrity errors, 413 capacity errors.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .documents import (
    ModelBundle,
    compile_to_document,
    parse_instance,
    parse_model_document,
)
from .errors import (
    CapacityError,
    ClassifierIntegrityError,
    ConfigurationError,
    InvalidArgumentError,
    InvalidDistributionError,
    ReasonKitError,
    UnknownStateError,
    UnknownVariableError,
    UnsupportedSplitError,
    ValidationError,
)
from .render import explanation_report, report_text
from .verify import run_verification

INPUT_ERRORS = (
    InvalidArgumentError,
    ValidationError,
    UnknownStateError,
    UnknownVariableError,
    UnsupportedSplitError,
    InvalidDistributionError,
    ConfigurationError,
)

app = FastAPI(
    title="reasonkit",
    version=__version__,
    description=(
        "Explanations with formal guarantees for discrete classifiers: "
        "complete/general reasons, sufficient/necessary reasons and "
        "targeted contrastive explanations."
    ),
)


class ExplainRequest(BaseModel):
    model_document: dict = Field(alias="model")
    instance: dict
    kinds: list[str] = ["cr"]
    target_class: Optional[str] = None

    model_config = {"populate_by_name": True}


class ExplainResponse(BaseModel):
    report: dict
    text: str


class CompileRequest(BaseModel):
    model_document: dict = Field(alias="model")
    class_label: Optional[str] = Field(default=None, alias="class")
    method: str = "cnnf"

    model_config = {"populate_by_name": True}


class CompileResponse(BaseModel):
    document: dict


class VerifyRequest(BaseModel):
    model_document: dict = Field(alias="model")
    seed: int = 0
    budget: Optional[int] = None
    samples: int = 4

    model_config = {"populate_by_name": True}


class CheckOut(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckOut]


class HealthResponse(BaseModel):
    status: str
    version: str


def _error_payload(kind: str, exc: Exception) -> dict:
    return {"kind": kind, "message": str(exc)}


def _raise_http(exc: ReasonKitError):
    if isinstance(exc, CapacityError):
        raise HTTPException(413, detail=_error_payload("capacity", exc))
    if isinstance(exc, ClassifierIntegrityError):
        raise HTTPException(409, detail=_error_payload("integrity", exc))
    if isinstance(exc, INPUT_ERRORS):
        raise HTTPException(400, detail=_error_payload("input", exc))
    raise HTTPException(500, detail=_error_payload("internal", exc))


@lru_cache(maxsize=32)
def _cached_bundle(doc_json: str, method: str) -> ModelBundle:
    return parse_model_document(json.loads(doc_json), method=method)


def _bundle(doc: dict, method: str = "cnnf") -> ModelBundle:
    return _cached_bundle(json.dumps(doc, sort_keys=True), method)


@app.get("/healthz", response_model=HealthResponse)
def healthz() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/explain", response_model=ExplainResponse)
def explain(request: ExplainRequest) -> ExplainResponse:
    try:
        bundle = _bundle(request.model_document)
        instance = parse_instance(bundle, request.instance)
        input_values = request.instance.get("values", request.instance)
        report = explanation_report(
            bundle,
            instance,
            input_values,
            request.kinds,
            target_class=request.target_class,
        )
        return ExplainResponse(report=report, text=report_text(report))
    except ReasonKitError as exc:
        _raise_http(exc)


@app.post("/compile", response_model=CompileResponse)
def compile_model(request: CompileRequest) -> CompileResponse:
    try:
        bundle = _bundle(request.model_document)
        label = request.class_label
        if label is None and request.method != "graph":
            raise InvalidArgumentError("a class label is required")
        return CompileResponse(
            document=compile_to_document(bundle, label, request.method)
        )
    except ReasonKitError as exc:
        _raise_http(exc)


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    try:
        bundle = _bundle(request.model_document)
        report = run_verification(
            bundle,
            seed=request.seed,
            budget=request.budget,
            samples=request.samples,
        )
        return VerifyResponse(
            passed=report.passed,
            checks=[
                CheckOut(name=c.name, passed=c.passed, detail=c.detail)
                for c in report.checks
            ],
        )
    except ReasonKitError as exc:
        _raise_http(exc)
