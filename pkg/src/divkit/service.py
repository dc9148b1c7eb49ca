"""Stateless HTTP scoring facade for RL trainers.

POST /v1/score scores generation groups, POST /v1/divergence computes
divergence reports, GET /v1/health reports liveness.  Every handler is a
pure function of the request body; responses use the same canonical
12-significant-digit rendering as the CLI so the two are byte-comparable.
"""

from __future__ import annotations

import os
import time
from contextlib import asynccontextmanager
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from pydantic import BaseModel, Field, field_validator

from . import jsonio
from .divergence import Convention, Solution, SolutionSet, divergence_report
from .errors import DomainError
from .reward import RewardConfig, binary_group_rewards, group_rewards

MAX_GROUPS_PER_REQUEST = 1024


class WireSolution(BaseModel):
    solution_id: str
    text: str
    correct: bool | None = None


class WireGroup(BaseModel):
    v: int = 1
    question_id: str
    solutions: list[WireSolution] = Field(min_length=1)

    @field_validator("v")
    @classmethod
    def _version(cls, v: int) -> int:
        if v != jsonio.SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {v}")
        return v


class ScoreRequest(BaseModel):
    groups: list[WireGroup]
    alpha: float = 4.0
    mode: Literal["fused", "binary"] = "fused"
    convention: Literal["standard", "self_loop"] = "standard"


class DivergenceRequest(BaseModel):
    sets: list[WireGroup]
    convention: Literal["standard", "self_loop"] = "standard"


def _to_set(group: WireGroup) -> SolutionSet:
    return SolutionSet(
        group.question_id,
        tuple(Solution(s.solution_id, s.text, s.correct) for s in group.solutions),
    )


def _canonical(payload: dict, status: int = 200) -> Response:
    return Response(
        content=jsonio.dumps_canonical(payload),
        status_code=status,
        media_type="application/json",
    )


def _error(status: int, message: str, details: list | None = None) -> Response:
    payload: dict = {"error": message}
    if details is not None:
        payload["details"] = details
    return _canonical(payload, status=status)


def create_app() -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        # Cap the sync-handler worker pool like the CLI caps its workers.
        threads = os.environ.get("DIVKIT_THREADS")
        if threads:
            from anyio import to_thread

            to_thread.current_default_thread_limiter().total_tokens = max(1, int(threads))
        yield

    app = FastAPI(title="divkit scoring service", lifespan=lifespan)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        details = [
            {
                "field": ".".join(str(part) for part in err.get("loc", ())),
                "message": err.get("msg", ""),
            }
            for err in exc.errors()
        ]
        return _error(400, "schema violation", details)

    @app.exception_handler(DomainError)
    async def _domain_handler(request: Request, exc: DomainError):
        if "unverified" in str(exc):
            return _error(422, str(exc))
        return _error(400, str(exc))

    @app.get("/v1/health")
    def health() -> Response:
        return _canonical({"status": "ok", "v": jsonio.SCHEMA_VERSION})

    @app.post("/v1/score")
    def score(request: ScoreRequest) -> Response:
        started = time.perf_counter()
        if len(request.groups) > MAX_GROUPS_PER_REQUEST:
            return _error(
                413, f"request carries {len(request.groups)} groups, cap is {MAX_GROUPS_PER_REQUEST}"
            )
        scores = []
        for group in request.groups:
            solution_set = _to_set(group)
            if request.mode == "binary":
                result = binary_group_rewards(solution_set)
            else:
                result = group_rewards(solution_set, config=RewardConfig(alpha=request.alpha))
            scores.append(jsonio.score_to_record(solution_set.question_id, result))
        elapsed_ms = int((time.perf_counter() - started) * 1000)
        return _canonical({"scores": scores, "elapsed_ms": elapsed_ms})

    @app.post("/v1/divergence")
    def divergence(request: DivergenceRequest) -> Response:
        started = time.perf_counter()
        convention = Convention(request.convention)
        reports = []
        for group in request.sets:
            solution_set = _to_set(group)
            report = divergence_report(solution_set, convention)
            reports.append(jsonio.report_to_record(solution_set.question_id, report))
        elapsed_ms = int((time.perf_counter() - started) * 1000)
        return _canonical({"reports": reports, "elapsed_ms": elapsed_ms})

    return app


app = create_app()
