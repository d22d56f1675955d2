"""Canonical JSON encoding for domain types.

One encoding serves both the snapshot files and the HTTP responses; the
field names here are the storage schema (see docs/storage_schema.md).
Decoders raise ValueError on shape violations; persistence wraps those
into CorruptSnapshot.
"""

from __future__ import annotations

from draftcanvas.model import (
    AppState,
    Canvas,
    ChatMessage,
    ChatRole,
    ChatSession,
    Condition,
    Document,
    EventKind,
    HistoryCause,
    HistoryEntry,
    InteractionEvent,
    OnCanvas,
    Viewport,
    Widget,
    WidgetOrigin,
    Workspace,
)


def widget_to_dict(widget: Widget) -> dict:
    placement = None
    if widget.placement is not None:
        placement = {
            "x": widget.placement.x,
            "y": widget.placement.y,
            "width": widget.placement.width,
            "height": widget.placement.height,
        }
    return {
        "id": widget.id,
        "title": widget.title,
        "value": widget.value,
        "suggestedValues": list(widget.suggested_values),
        "savedValues": list(widget.saved_values),
        "origin": widget.origin.value,
        "placement": placement,
        "isNew": widget.is_new,
        "createdAt": widget.created_at,
    }


def widget_from_dict(data: dict) -> Widget:
    placement = None
    if data.get("placement") is not None:
        p = data["placement"]
        placement = OnCanvas(
            float(p["x"]), float(p["y"]), float(p["width"]), float(p["height"])
        )
    return Widget(
        id=str(data["id"]),
        title=str(data["title"]),
        value=str(data["value"]),
        suggested_values=[str(v) for v in data["suggestedValues"]],
        saved_values=[str(v) for v in data["savedValues"]],
        origin=WidgetOrigin(data["origin"]),
        placement=placement,
        is_new=bool(data["isNew"]),
        created_at=float(data["createdAt"]),
    )


def history_entry_to_dict(entry: HistoryEntry) -> dict:
    snapshot = None
    if entry.active_widget_snapshot is not None:
        snapshot = [[title, value] for title, value in entry.active_widget_snapshot]
    return {
        "id": entry.id,
        "text": entry.text,
        "cause": entry.cause.value,
        "promptUsed": entry.prompt_used,
        "activeWidgetSnapshot": snapshot,
        "timestamp": entry.timestamp,
    }


def history_entry_from_dict(data: dict) -> HistoryEntry:
    snapshot = None
    if data.get("activeWidgetSnapshot") is not None:
        snapshot = [(str(t), str(v)) for t, v in data["activeWidgetSnapshot"]]
    return HistoryEntry(
        id=str(data["id"]),
        text=str(data["text"]),
        cause=HistoryCause(data["cause"]),
        prompt_used=data.get("promptUsed"),
        active_widget_snapshot=snapshot,
        timestamp=float(data["timestamp"]),
    )


def document_to_dict(document: Document) -> dict:
    return {
        "text": document.text,
        "wordCount": document.word_count,
        "history": [history_entry_to_dict(e) for e in document.history],
    }


def document_from_dict(data: dict) -> Document:
    return Document(
        text=str(data["text"]),
        history=[history_entry_from_dict(e) for e in data["history"]],
    )


def canvas_to_dict(canvas: Canvas) -> dict:
    return {
        "id": canvas.id,
        "name": canvas.name,
        "widgets": [widget_to_dict(w) for w in canvas.widgets],
        "document": document_to_dict(canvas.document),
        "viewport": {
            "panX": canvas.viewport.pan_x,
            "panY": canvas.viewport.pan_y,
            "zoom": canvas.viewport.zoom,
        },
        "createdAt": canvas.created_at,
    }


def canvas_from_dict(data: dict) -> Canvas:
    viewport = data["viewport"]
    return Canvas(
        id=str(data["id"]),
        name=str(data["name"]),
        widgets=[widget_from_dict(w) for w in data["widgets"]],
        document=document_from_dict(data["document"]),
        viewport=Viewport(
            float(viewport["panX"]), float(viewport["panY"]), float(viewport["zoom"])
        ),
        created_at=float(data["createdAt"]),
    )


def workspace_to_dict(workspace: Workspace) -> dict:
    return {
        "canvases": [canvas_to_dict(c) for c in workspace.canvases],
        "activeCanvasId": workspace.active_canvas_id,
        "schemaVersion": workspace.schema_version,
    }


def workspace_from_dict(data: dict) -> Workspace:
    return Workspace(
        canvases=[canvas_from_dict(c) for c in data["canvases"]],
        active_canvas_id=str(data["activeCanvasId"]),
        schema_version=int(data["schemaVersion"]),
    )


def chat_message_to_dict(message: ChatMessage) -> dict:
    return {
        "role": message.role.value,
        "content": message.content,
        "createdAt": message.created_at,
        "error": message.error,
    }


def chat_message_from_dict(data: dict) -> ChatMessage:
    return ChatMessage(
        role=ChatRole(data["role"]),
        content=str(data["content"]),
        created_at=float(data["createdAt"]),
        error=data.get("error"),
    )


def chat_to_dict(chat: ChatSession) -> dict:
    return {
        "id": chat.id,
        "title": chat.title,
        "messages": [chat_message_to_dict(m) for m in chat.messages],
        "createdAt": chat.created_at,
    }


def chat_from_dict(data: dict) -> ChatSession:
    return ChatSession(
        id=str(data["id"]),
        title=str(data["title"]),
        messages=[chat_message_from_dict(m) for m in data["messages"]],
        created_at=float(data["createdAt"]),
    )


def state_to_dict(state: AppState, saved_at: float, schema_version: int) -> dict:
    return {
        "schemaVersion": schema_version,
        "savedAt": saved_at,
        "workspace": workspace_to_dict(state.workspace),
        "chats": [chat_to_dict(c) for c in state.chats],
    }


def state_from_dict(data: dict) -> AppState:
    return AppState(
        workspace=workspace_from_dict(data["workspace"]),
        chats=[chat_from_dict(c) for c in data["chats"]],
    )


def event_to_dict(event: InteractionEvent) -> dict:
    return {
        "ts": event.ts,
        "session": event.session,
        "condition": event.condition.value,
        "kind": event.kind.value,
        "payload": dict(event.payload),
    }


def event_from_dict(data: dict) -> InteractionEvent:
    return InteractionEvent(
        ts=float(data["ts"]),
        session=str(data["session"]),
        condition=Condition(data["condition"]),
        kind=EventKind(data["kind"]),
        payload=dict(data.get("payload") or {}),
    )
