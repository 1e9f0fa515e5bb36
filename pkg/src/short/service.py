"""HTTP/JSON API for the interactive what-if console.

A thin shell over the library: sessions hold a model, a frozen cost
draw, pinned decisions, and enabled objectives; /run recomputes the
rank/test/keys pipeline with the pins forced as the prior prefix. For
identical (model, pins, objectives, seed) the /run body is byte
identical, because the response is rendered through the same canonical
JSON writer the CLI uses and the library adds no hidden state.

Sessions are in-memory; each one runs exclusively (a non-blocking lock
turns overlapping /run calls into 409s) while distinct sessions run
concurrently.
"""

from __future__ import annotations

import hashlib
import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from short.config import PipelineConfig
from short.model import (
    CostAssignment,
    GoalModel,
    ModelError,
    leaves,
    load_model,
    model_from_dict,
    sample_costs,
)
from short.ranking import KeysResult, find_keys
from short.report import canonical_json

POLARITIES = ("satisfied", "denied")
OBJECTIVE_KEYS = ("o1", "o2", "o3", "o4")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class SessionState:
    session_id: str
    model_id: str
    model: GoalModel
    costs: CostAssignment
    seed: int
    pinned: list[tuple[str, str]] = field(default_factory=list)
    enabled: tuple[str, ...] = OBJECTIVE_KEYS
    results: KeysResult | None = None
    stale: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)

    def view(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "session_id": self.session_id,
            "model_id": self.model_id,
            "seed": self.seed,
            "pinned": [list(p) for p in self.pinned],
            "objectives": list(self.enabled),
            "stale": self.stale,
            "has_results": self.results is not None,
        }
        if self.results is not None:
            out["results"] = _results_payload(self)
        return out


def _results_payload(session: SessionState) -> dict[str, Any]:
    assert session.results is not None
    return {
        "ordering": session.results.ordering.to_dict(),
        "curve": session.results.curve.to_dict(),
        "report": session.results.report.to_dict(),
        "pinned": [list(p) for p in session.pinned],
        "objectives": list(session.enabled),
        "seed": session.seed,
        "stale": session.stale,
    }


def _canonical(payload: Any, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload), media_type="application/json", status_code=status
    )


def create_app(
    cfg: PipelineConfig | None = None,
    *,
    ui_dir: str | Path | None = "frontend/dist",
) -> FastAPI:
    pipeline_cfg = cfg or PipelineConfig()
    app = FastAPI(title="short what-if service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    models: dict[str, GoalModel] = {}
    invalid_models: set[str] = set()
    sessions: dict[str, SessionState] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()
    # handles for tests and embedding; the HTTP surface is the contract
    app.state.models = models
    app.state.sessions = sessions

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation(_req: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"code": "bad_request", "message": str(exc)}
        )

    def get_session(session_id: str) -> SessionState:
        session = sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return session

    @app.post("/models")
    def post_model(body: dict) -> Response:
        if "text" in body:
            source = body["text"]
            if not isinstance(source, str):
                raise ApiError(400, "bad_model", "'text' must be a string")
            loader = load_model
        elif "nodes" in body:
            source = body
            loader = model_from_dict
        else:
            raise ApiError(400, "bad_model", "body needs 'text' or 'nodes'")
        try:
            model = loader(source)
        except ModelError as exc:
            if not exc.violations:
                raise ApiError(400, "bad_model", str(exc))
            # parsed but structurally invalid: report it, remember the id so
            # session creation can say why it is unusable
            digest = hashlib.sha256(repr(source).encode()).hexdigest()[:12]
            model_id = f"m{digest}"
            with registry_lock:
                invalid_models.add(model_id)
            return _canonical(
                {
                    "model_id": model_id,
                    "validation": {
                        "valid": False,
                        "violations": [
                            {"rule": v.rule, "subject": v.subject, "message": v.message}
                            for v in exc.violations
                        ],
                    },
                }
            )
        digest = hashlib.sha256(repr(model).encode()).hexdigest()[:12]
        model_id = f"m{digest}"
        with registry_lock:
            models[model_id] = model
        return _canonical(
            {
                "model_id": model_id,
                "validation": {"valid": True, "violations": []},
            }
        )

    @app.post("/sessions")
    def post_session(body: dict) -> Response:
        model_id = body.get("model_id")
        if isinstance(model_id, str) and model_id in invalid_models:
            raise ApiError(400, "invalid_model", "model failed validation")
        if not isinstance(model_id, str) or model_id not in models:
            raise ApiError(404, "unknown_model", f"no model {model_id!r}")
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or seed < 0:
            raise ApiError(400, "bad_seed", "seed must be a non-negative integer")
        model = models[model_id]
        with registry_lock:
            session_id = f"s{next(counter)}"
            session = SessionState(
                session_id=session_id,
                model_id=model_id,
                model=model,
                costs=sample_costs(model, seed=seed),
                seed=seed,
            )
            sessions[session_id] = session
        return _canonical(session.view())

    @app.get("/sessions/{session_id}")
    def get_session_view(session_id: str) -> Response:
        return _canonical(get_session(session_id).view())

    @app.post("/sessions/{session_id}/pins")
    def post_pin(session_id: str, body: dict) -> Response:
        session = get_session(session_id)
        node = body.get("decision", body.get("node"))
        polarity = body.get("polarity")
        if not isinstance(node, str) or node not in set(leaves(session.model)):
            raise ApiError(400, "bad_pin", f"{node!r} is not a decision leaf")
        if polarity not in POLARITIES:
            raise ApiError(400, "bad_pin", f"polarity must be one of {POLARITIES}")
        with session.lock:
            session.pinned = [p for p in session.pinned if p[0] != node]
            session.pinned.append((node, polarity))
            if session.results is not None:
                session.stale = True
        return _canonical(session.view())

    @app.delete("/sessions/{session_id}/pins/{node}")
    def delete_pin(session_id: str, node: str) -> Response:
        session = get_session(session_id)
        with session.lock:
            if all(p[0] != node for p in session.pinned):
                raise ApiError(404, "unknown_pin", f"{node!r} is not pinned")
            session.pinned = [p for p in session.pinned if p[0] != node]
            if session.results is not None:
                session.stale = True
        return _canonical(session.view())

    @app.post("/sessions/{session_id}/objectives")
    def post_objectives(session_id: str, body: dict) -> Response:
        session = get_session(session_id)
        enabled = body.get("enabled")
        if not isinstance(enabled, list) or not enabled:
            raise ApiError(400, "bad_objectives", "'enabled' must be a nonempty list")
        bad = [k for k in enabled if k not in OBJECTIVE_KEYS]
        if bad:
            raise ApiError(400, "bad_objectives", f"unknown objectives: {bad}")
        ordered = tuple(k for k in OBJECTIVE_KEYS if k in set(enabled))
        with session.lock:
            if ordered != session.enabled:
                session.enabled = ordered
                if session.results is not None:
                    session.stale = True
        return _canonical(session.view())

    @app.post("/sessions/{session_id}/run")
    def post_run(session_id: str) -> Response:
        session = get_session(session_id)
        if not session.lock.acquire(blocking=False):
            raise ApiError(409, "run_in_progress", "another run is active in this session")
        try:
            cfg_run = pipeline_cfg.with_objectives(session.enabled)
            results = find_keys(
                session.model,
                session.costs.values,
                cfg_run,
                Random(session.seed),
                base_prior=tuple(session.pinned),
            )
            session.results = results
            session.stale = False
        finally:
            session.lock.release()
        return _canonical(_results_payload(session))

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path and ui_path.is_dir():
        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")

    return app
