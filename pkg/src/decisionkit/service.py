"""HTTP session service.

Exposes the interactive loop over JSON endpoints so external clients (the
web frontend included) can pull pending queries and push answers. Every
state change is written to disk immediately, so a restarted service picks
up exactly where it stopped. Mutations accept an optional request token;
retrying with the same token returns the original result instead of
re-applying the answer.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .engine import init_session, start, submit_answer, attribute_from_spec
from .errors import (DecisionError, ParseError, ProtocolViolation,
                     UnsupportedVersion)
from .formulation import ProblemStatement
from .model_io import (decode_document, decode_session, encode_document,
                       encode_session, _enc_partition)

STORE_ENV = "DECISIONKIT_STORE"
DEFAULT_STORE = ".decisionkit-store"


class SessionStore:
    """Disk-backed session and model storage with per-session locking."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        (self.root / "models").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _session_path(self, session_id: str) -> Path:
        if not session_id or "/" in session_id or session_id.startswith("."):
            raise HTTPException(400, "invalid session id")
        return self.root / "sessions" / f"{session_id}.json"

    def _model_path(self, name: str) -> Path:
        if not name or "/" in name or name.startswith("."):
            raise HTTPException(400, "invalid model name")
        return self.root / "models" / f"{name}.json"

    def save_session(self, session, tokens: dict) -> None:
        payload = {"session": encode_session(session), "tokens": tokens}
        path = self._session_path(session.id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True,
                                  separators=(",", ":"),
                                  ensure_ascii=False) + "\n",
                       encoding="utf-8")
        tmp.replace(path)

    def load_session(self, session_id: str):
        path = self._session_path(session_id)
        if not path.exists():
            raise HTTPException(404, f"no session {session_id}")
        data = json.loads(path.read_text(encoding="utf-8"))
        return decode_session(data["session"]), data.get("tokens", {})

    def save_model(self, name: str, data: dict) -> None:
        try:
            decode_document(data)  # validate before accepting
        except UnsupportedVersion as exc:
            raise HTTPException(400, str(exc))
        except ParseError as exc:
            raise HTTPException(400, str(exc))
        path = self._model_path(name)
        path.write_text(json.dumps(data, sort_keys=True,
                                   separators=(",", ":"),
                                   ensure_ascii=False) + "\n",
                        encoding="utf-8")

    def load_model(self, name: str) -> dict:
        path = self._model_path(name)
        if not path.exists():
            raise HTTPException(404, f"no model {name}")
        return json.loads(path.read_text(encoding="utf-8"))


def create_app(store: str | Path | None = None) -> FastAPI:
    root = store or os.environ.get(STORE_ENV, DEFAULT_STORE)
    storage = SessionStore(root)
    app = FastAPI(title="decisionkit session service")
    app.state.store = storage

    @app.exception_handler(DecisionError)
    async def _decision_error(request: Request, exc: DecisionError):
        status = 409 if isinstance(exc, ProtocolViolation) else 400
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__,
                                     "detail": str(exc)})

    @app.post("/sessions")
    async def create_session(body: dict):
        try:
            seed = attribute_from_spec(body["seed_attribute"])
            stmt_spec = body.get("statement", {})
            statement = ProblemStatement(
                kind=stmt_spec.get("kind", "ranking"),
                class_count=stmt_spec.get("class_count"))
        except (KeyError, TypeError) as exc:
            raise HTTPException(400, f"malformed session request: {exc}")
        session_id = body.get("id") or uuid.uuid4().hex
        if storage._session_path(session_id).exists():
            raise HTTPException(409, f"session {session_id} already exists")
        session = init_session(seed, statement, session_id=session_id,
                               max_iter=body.get("max_iter", 50))
        start(session)
        storage.save_session(session, {})
        return {"id": session.id, "status": session.status,
                "iteration": session.iteration}

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        session, _ = storage.load_session(session_id)
        return encode_session(session)

    @app.get("/sessions/{session_id}/pending")
    async def get_pending(session_id: str):
        session, _ = storage.load_session(session_id)
        return {"status": session.status,
                "pending": [{"kind": q.kind, "key": q.key,
                             "payload": q.payload}
                            for q in session.pending]}

    @app.get("/sessions/{session_id}/partition")
    async def get_partition(session_id: str):
        session, _ = storage.load_session(session_id)
        return {"status": session.status,
                "iteration": session.iteration,
                "partition": _enc_partition(session.current_partition)}

    @app.post("/sessions/{session_id}/answers")
    async def post_answer(session_id: str, body: dict):
        if "key" not in body or "answer" not in body:
            raise HTTPException(400, "answer body needs 'key' and 'answer'")
        token = body.get("token")
        with storage.lock(session_id):
            session, tokens = storage.load_session(session_id)
            if token is not None and token in tokens:
                return tokens[token]
            submit_answer(session, body["key"], body["answer"])
            result = {"status": session.status,
                      "iteration": session.iteration,
                      "pending": [{"kind": q.kind, "key": q.key,
                                   "payload": q.payload}
                                  for q in session.pending]}
            if token is not None:
                tokens[token] = result
            storage.save_session(session, tokens)
        return result

    @app.get("/models/{name}")
    async def get_model(name: str):
        return storage.load_model(name)

    @app.put("/models/{name}")
    async def put_model(name: str, body: dict):
        storage.save_model(name, body)
        return {"name": name, "stored": True}

    return app


def serve(port: int = 8000, store: str | Path | None = None,
          host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
