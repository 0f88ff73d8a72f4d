"""HTTP surface: session lifecycle, message streaming over server-sent
events, catalog rendering, and health."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import SessionBusyError, SessionNotFoundError
from ..registry import catalog_to_dict, render_tool_list
from .orchestrator import Orchestrator


class MessageBody(BaseModel):
    text: str


def sse_line(payload: dict) -> str:
    return f"data: {json.dumps(payload, sort_keys=True)}\n\n"


def create_app(orchestrator: Orchestrator, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="tokenscope", version="0.1.0")
    # The UI bundle may be served from any static host.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/tools")
    def tools():
        catalog = orchestrator.clients.catalog
        return {
            "version": catalog.version,
            "rendered": render_tool_list(catalog),
            "tools": catalog_to_dict(catalog)["tools"],
        }

    @app.post("/api/sessions")
    def create_session():
        record = orchestrator.create_session()
        return {"session_id": record.session_id}

    @app.get("/api/sessions")
    def list_sessions():
        return orchestrator.list_sessions()

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            return orchestrator.get_session(session_id).transcript()
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.get("/api/sessions/{session_id}/artifacts/{ref}")
    def get_artifact(session_id: str, ref: str):
        try:
            return orchestrator.store.artifact(session_id, ref)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageBody):
        try:
            orchestrator.get_session(session_id)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        if not body.text.strip():
            raise HTTPException(status_code=422, detail="text must be non-empty")

        def stream():
            try:
                for event in orchestrator.handle_message(session_id, body.text):
                    yield sse_line(event.to_dict())
            except SessionBusyError as exc:
                yield sse_line({"kind": "error", "payload": {"stage": "session", "error": str(exc)}, "seq": 0})

        # busy check happens before the stream starts so the client gets 409
        record = orchestrator.get_session(session_id)
        if record.status == "running":
            raise HTTPException(status_code=409, detail="session is busy")
        return StreamingResponse(stream(), media_type="text/event-stream")

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
