"""HTTP session layer over the elicitation engine.

Endpoints (JSON bodies, decimal numbers):

* ``POST /sessions`` -- create a session from an instance document plus
  ``tau``/``sense``; runs until the first pending query (optionally
  replaying a prefix of ``answers``).  Returns the session view.
* ``GET /sessions/{id}`` -- idempotent snapshot (adds vertex
  coordinates when p <= 4 so a UI can draw the region).
* ``POST /sessions/{id}/answer`` -- body ``{"choice": "l"|"k"}``;
  applies the answer and advances to the next query or terminal state.
* ``GET /sessions/{id}/trace`` -- per-iteration trace rows.
* ``GET /healthz``.

Sessions live in memory behind per-session locks; an optional
append-only JSONL journal records creations and answers so a crashed
session can be forked from any prefix by re-posting its answers.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from pathlib import Path
from typing import Any, Literal

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .cli import report_to_dict
from .elicitation import ElicitationEngine, RunStatus
from .instances import SchemaError, parse_instance
from .matroid import InputError
from .regret import Choice

MAX_QUERY_P_FOR_COORDS = 4


class CreateSessionBody(BaseModel):
    instance: dict[str, Any]
    tau: float | Literal["inf"] = 0.0
    sense: Literal["min", "max"] = "min"
    max_iters: int = Field(default=500, ge=1)
    answers: list[Literal["l", "k"]] = Field(default_factory=list)


class AnswerBody(BaseModel):
    choice: Literal["l", "k"]
    # optional guard: the iteration this answer targets; a stale value
    # (e.g. the loser of two concurrent submits) is rejected with 409
    iteration: int | None = None


class Session:
    def __init__(self, engine: ElicitationEngine, config: dict[str, Any]):
        self.id = secrets.token_urlsafe(16)  # 128 bits
        self.engine = engine
        self.config = config
        self.lock = threading.Lock()
        self.created_at = time.time()
        self.updated_at = self.created_at

    def view(self) -> dict[str, Any]:
        engine = self.engine
        state = engine.state
        report = report_to_dict(engine.report())
        pending = None
        if engine.pending is not None:
            l, k = engine.pending
            pending = {
                "l": l,
                "k": k,
                "attributes_l": state.ctx.Y.y[l - 1].tolist(),
                "attributes_k": state.ctx.Y.y[k - 1].tolist(),
            }
        doc = {
            "id": self.id,
            "status": engine.status.value,
            "iteration": state.r,
            "pending_query": pending,
            "vertex_count": state.polytope.num_vertices,
            "mmr_bound": report["final_bound"],
            "best_base": report["final_base"],
            "query_count": report["query_count"],
            "history": report["history"],
            "trace": report["trace"],
            "config": self.config,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }
        if state.ctx.Y.p <= MAX_QUERY_P_FOR_COORDS:
            doc["region_vertices"] = state.polytope.vertices.tolist()
        return doc


class SessionStore:
    def __init__(self, journal_path: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._journal = Path(journal_path) if journal_path else None
        self._journal_lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session id")
        return session

    def journal(self, event: dict[str, Any]) -> None:
        if self._journal is None:
            return
        with self._journal_lock:
            with open(self._journal, "a") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")


def create_app(journal_path: str | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="matroid-elicit session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(journal_path)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        try:
            instance, Y = parse_instance(body.instance)
            tau = float("inf") if body.tau == "inf" else float(body.tau)
            if tau < 0:
                raise InputError("tau must be >= 0")
            engine = ElicitationEngine(
                instance, Y, tau=tau, sense=body.sense, max_iters=body.max_iters
            )
        except SchemaError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except InputError as exc:
            # well-formed but semantically inconsistent (e.g. disconnected graph)
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session = Session(
            engine,
            config={
                "kind": instance.kind.value,
                "n": instance.n,
                "p": Y.p,
                "tau": "inf" if tau == float("inf") else tau,
                "sense": body.sense,
                "max_iters": body.max_iters,
            },
        )
        engine.advance()
        for text in body.answers:
            if engine.status is not RunStatus.RUNNING or engine.pending is None:
                break
            engine.submit(Choice(text))
            engine.advance()
        store.add(session)
        store.journal(
            {
                "event": "created",
                "session": session.id,
                "config": session.config,
                "instance": body.instance,
                "answers": list(body.answers),
            }
        )
        return session.view()

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str) -> dict[str, Any]:
        return store.get(session_id).view()

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str) -> dict[str, Any]:
        session = store.get(session_id)
        view = session.view()
        return {"id": session.id, "status": view["status"], "trace": view["trace"]}

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(session_id: str, body: AnswerBody) -> dict[str, Any]:
        session = store.get(session_id)
        with session.lock:
            engine = session.engine
            if engine.pending is None or engine.status is not RunStatus.RUNNING:
                raise HTTPException(status_code=409, detail="no pending query")
            if body.iteration is not None and body.iteration != engine.state.r:
                raise HTTPException(
                    status_code=409, detail="answer targets a stale query"
                )
            engine.submit(Choice(body.choice))
            engine.advance()
            session.updated_at = time.time()
            store.journal(
                {"event": "answered", "session": session.id, "choice": body.choice}
            )
            return session.view()

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
