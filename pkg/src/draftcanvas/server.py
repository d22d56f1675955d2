"""HTTP + server-sent-events API over the canvas and chat services."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from draftcanvas import __version__
from draftcanvas.chat import ChatService
from draftcanvas.gateway import (
    AuthError,
    GatewayError,
    NetworkError,
    ProviderError,
    RateLimited,
    Timeout,
)
from draftcanvas.model import (
    AlreadyOnCanvas,
    DomainError,
    GenerationInProgress,
    NotOnCanvas,
    NotRunning,
    UnknownCanvas,
    UnknownChat,
    UnknownEntry,
    UnknownJob,
    UnknownWidget,
)
from draftcanvas.parsing import MalformedModelOutput
from draftcanvas.prompts import PromptConfig
from draftcanvas.runtime import Runtime
from draftcanvas.serialization import (
    canvas_to_dict,
    chat_to_dict,
    document_to_dict,
    history_entry_to_dict,
    widget_to_dict,
)
from draftcanvas.service import CanvasService, GenerationJob, JobState

_NOT_FOUND = (UnknownCanvas, UnknownWidget, UnknownEntry, UnknownChat, UnknownJob)
_CONFLICT = (AlreadyOnCanvas, NotOnCanvas, GenerationInProgress, NotRunning)

_GATEWAY_STATUS = {
    AuthError: 502,
    RateLimited: 503,
    NetworkError: 502,
    Timeout: 504,
    ProviderError: 502,
}


def _error_body(exc: Exception) -> dict:
    body = {"error": type(exc).__name__, "detail": str(exc)}
    if isinstance(exc, (MalformedModelOutput, RateLimited)):
        body["retryable"] = True
    return body


def _sse(payload: dict) -> str:
    return f"data: {json.dumps(payload)}\n\n"


def _job_to_dict(job: GenerationJob) -> dict:
    return {
        "jobId": job.id,
        "canvasId": job.canvas_id,
        "purpose": job.purpose.value,
        "state": job.state.value,
        "startedAt": job.started_at,
    }


def create_app(
    runtime: Runtime,
    config: PromptConfig | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    canvases = CanvasService(runtime, config)
    chats = ChatService(runtime, config)
    app = FastAPI(title="draftcanvas", version=__version__)
    app.state.canvases = canvases
    app.state.chats = chats
    app.state.runtime = runtime
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(DomainError)
    def on_domain_error(request: Request, exc: DomainError) -> JSONResponse:
        if isinstance(exc, _NOT_FOUND):
            status = 404
        elif isinstance(exc, _CONFLICT):
            status = 409
        elif isinstance(exc, MalformedModelOutput):
            status = 502
        else:
            status = 400
        return JSONResponse(status_code=status, content=_error_body(exc))

    @app.exception_handler(GatewayError)
    def on_gateway_error(request: Request, exc: GatewayError) -> JSONResponse:
        status = _GATEWAY_STATUS.get(type(exc), 502)
        return JSONResponse(status_code=status, content=_error_body(exc))

    # -- canvases ---------------------------------------------------------

    @app.get("/canvases")
    def list_canvases() -> dict:
        with runtime.lock:
            return {
                "canvases": [canvas_to_dict(c) for c in canvases.list_canvases()],
                "activeCanvasId": canvases.workspace.active_canvas_id,
            }

    @app.post("/canvases", status_code=201)
    def create_canvas(body: dict = Body(default={})) -> dict:
        return canvas_to_dict(canvases.create_canvas(body.get("name")))

    @app.post("/canvases/{canvas_id}/copy", status_code=201)
    def copy_canvas(canvas_id: str) -> dict:
        return canvas_to_dict(canvases.copy_canvas(canvas_id))

    @app.delete("/canvases/{canvas_id}")
    def delete_canvas(canvas_id: str) -> dict:
        canvases.delete_canvas(canvas_id)
        return {"deleted": canvas_id}

    # -- widgets ----------------------------------------------------------

    @app.post("/canvases/{canvas_id}/widgets", status_code=201)
    def create_widget(canvas_id: str, body: dict = Body(default={})) -> dict:
        widget = canvases.create_empty_widget(
            canvas_id, float(body.get("x", 0.0)), float(body.get("y", 0.0))
        )
        return widget_to_dict(widget)

    @app.patch("/widgets/{widget_id}")
    def update_widget(widget_id: str, body: dict = Body(default={})) -> dict:
        def _num(key: str) -> float | None:
            return float(body[key]) if key in body and body[key] is not None else None

        widget = canvases.update_widget(
            widget_id,
            title=body.get("title"),
            value=body.get("value"),
            x=_num("x"),
            y=_num("y"),
            width=_num("width"),
            height=_num("height"),
            placement=body.get("placement"),
        )
        return widget_to_dict(widget)

    @app.delete("/widgets/{widget_id}")
    def delete_widget(widget_id: str) -> dict:
        canvases.delete_widget(widget_id)
        return {"deleted": widget_id}

    @app.post("/canvases/{canvas_id}/widgets/suggest")
    def suggest_widgets(canvas_id: str) -> dict:
        created = canvases.request_widget_suggestions(canvas_id)
        return {"widgets": [widget_to_dict(w) for w in created]}

    @app.post("/canvases/{canvas_id}/widgets/themed")
    def themed_widgets(canvas_id: str, body: dict = Body(default={})) -> dict:
        created = canvases.request_themed_widgets(canvas_id, body.get("theme", ""))
        return {"widgets": [widget_to_dict(w) for w in created]}

    @app.post("/widgets/{widget_id}/values/suggest")
    def suggest_values(widget_id: str) -> dict:
        return widget_to_dict(canvases.request_value_suggestions(widget_id))

    @app.post("/widgets/{widget_id}/values/save")
    def save_value(widget_id: str) -> dict:
        return widget_to_dict(canvases.save_widget_value(widget_id))

    # -- document, history, jobs -------------------------------------------

    @app.put("/canvases/{canvas_id}/document")
    def put_document(canvas_id: str, body: dict = Body(default={})) -> dict:
        document = canvases.update_document(canvas_id, str(body.get("text", "")))
        return document_to_dict(document)

    @app.get("/canvases/{canvas_id}/history")
    def get_history(canvas_id: str) -> dict:
        entries = canvases.history(canvas_id)
        return {"history": [history_entry_to_dict(e) for e in entries]}

    @app.post("/canvases/{canvas_id}/history/{entry_id}/revert")
    def revert(canvas_id: str, entry_id: str) -> dict:
        return document_to_dict(canvases.revert_history(canvas_id, entry_id))

    @app.post("/canvases/{canvas_id}/generate")
    def generate(canvas_id: str, body: dict = Body(default={})) -> StreamingResponse:
        job = canvases.generate_text(canvas_id, str(body.get("prompt", "")))
        return _job_stream_response(canvases, job)

    @app.post("/canvases/{canvas_id}/rephrase")
    def rephrase(canvas_id: str) -> StreamingResponse:
        job = canvases.rephrase_text(canvas_id)
        return _job_stream_response(canvases, job)

    @app.post("/jobs/{job_id}/cancel")
    def cancel_job(job_id: str) -> dict:
        return _job_to_dict(canvases.cancel_job(job_id))

    # -- events --------------------------------------------------------------

    @app.get("/events")
    def export_events(since: float | None = None) -> PlainTextResponse:
        records = runtime.export_events(since)
        body = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
        return PlainTextResponse(body, media_type="application/x-ndjson")

    # -- chats -----------------------------------------------------------------

    @app.get("/chats")
    def list_chats() -> dict:
        return {"chats": [chat_to_dict(c) for c in chats.list_chats()]}

    @app.post("/chats", status_code=201)
    def create_chat(body: dict = Body(default={})) -> dict:
        return chat_to_dict(chats.create_chat(body.get("title")))

    @app.post("/chats/{chat_id}/duplicate", status_code=201)
    def duplicate_chat(chat_id: str) -> dict:
        return chat_to_dict(chats.duplicate_chat(chat_id))

    @app.delete("/chats/{chat_id}")
    def delete_chat(chat_id: str) -> dict:
        chats.delete_chat(chat_id)
        return {"deleted": chat_id}

    @app.get("/chats/{chat_id}")
    def get_chat(chat_id: str) -> dict:
        return chat_to_dict(chats.get_chat(chat_id))

    @app.post("/chats/{chat_id}/messages")
    def send_message(chat_id: str, body: dict = Body(default={})) -> StreamingResponse:
        reply = chats.send_message(chat_id, str(body.get("content", "")))
        return _chat_stream_response(reply)

    @app.post("/chats/{chat_id}/messages/{index}/edit")
    def edit_message(
        chat_id: str, index: int, body: dict = Body(default={})
    ) -> StreamingResponse:
        reply = chats.edit_message(chat_id, index, str(body.get("content", "")))
        return _chat_stream_response(reply)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _job_stream_response(
    canvases: CanvasService, job: GenerationJob
) -> StreamingResponse:
    def events() -> Iterator[str]:
        try:
            for chunk in canvases.stream_job(job.id):
                yield _sse({"jobId": job.id, "chunk": chunk})
        except GatewayError as exc:
            yield _sse({"jobId": job.id, **_error_body(exc)})
            return
        if job.state is JobState.DONE:
            yield _sse({"jobId": job.id, "done": True, "finalText": job.final_text})
        else:
            yield _sse({"jobId": job.id, "cancelled": True})

    return StreamingResponse(events(), media_type="text/event-stream")


def _chat_stream_response(reply: Iterator[str]) -> StreamingResponse:
    def events() -> Iterator[str]:
        parts: list[str] = []
        try:
            for chunk in reply:
                parts.append(chunk)
                yield _sse({"chunk": chunk})
        except GatewayError as exc:
            yield _sse(_error_body(exc))
            return
        yield _sse({"done": True, "finalText": "".join(parts)})

    return StreamingResponse(events(), media_type="text/event-stream")
