"""Domain types and pure state transitions for the canvas workbench.

Everything here is deterministic data manipulation: widgets, canvases,
documents, history, chat sessions, and interaction events. Serializing
concurrent mutations is the service layer's job.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

SCHEMA_VERSION = 1

DEFAULT_WIDGET_WIDTH = 240.0
DEFAULT_WIDGET_HEIGHT = 160.0


def new_id() -> str:
    return uuid.uuid4().hex


class DomainError(Exception):
    """Base for errors the HTTP layer maps to client-facing responses."""


class UnknownCanvas(DomainError):
    pass


class UnknownWidget(DomainError):
    pass


class UnknownEntry(DomainError):
    pass


class UnknownChat(DomainError):
    pass


class UnknownJob(DomainError):
    pass


class AlreadyOnCanvas(DomainError):
    pass


class NotOnCanvas(DomainError):
    pass


class GenerationInProgress(DomainError):
    pass


class NotRunning(DomainError):
    pass


class EmptyValue(DomainError):
    pass


class EmptyMessage(DomainError):
    pass


class NotAUserMessage(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class WidgetOrigin(str, Enum):
    SYSTEM_SUGGESTED = "SystemSuggested"
    THEMED_PROMPT = "ThemedPrompt"
    MANUAL = "Manual"


class HistoryCause(str, Enum):
    USER_EDIT = "UserEdit"
    GENERATION = "Generation"
    REPHRASE = "Rephrase"
    REVERT = "Revert"


class Condition(str, Enum):
    DYNAMIC_UI = "DynamicUI"
    STATIC_UI = "StaticUI"


class EventKind(str, Enum):
    PROMPT_SUBMITTED = "PromptSubmitted"
    REPHRASE_REQUESTED = "RephraseRequested"
    WIDGET_CREATED = "WidgetCreated"
    WIDGET_ACTIVATED = "WidgetActivated"
    WIDGET_DELETED = "WidgetDeleted"
    SUGGESTION_REQUESTED = "SuggestionRequested"
    HISTORY_REVERTED = "HistoryReverted"
    CHAT_MESSAGE_SENT = "ChatMessageSent"
    CHAT_MESSAGE_EDITED = "ChatMessageEdited"


@dataclass(frozen=True)
class OnCanvas:
    """Spatial placement; a widget not on the canvas sits in the panel."""

    x: float
    y: float
    width: float = DEFAULT_WIDGET_WIDTH
    height: float = DEFAULT_WIDGET_HEIGHT

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas widgets need positive width and height")


@dataclass
class Widget:
    id: str
    title: str = "Untitled"
    value: str = ""
    suggested_values: list[str] = field(default_factory=list)
    saved_values: list[str] = field(default_factory=list)
    origin: WidgetOrigin = WidgetOrigin.MANUAL
    placement: OnCanvas | None = None
    is_new: bool = False
    created_at: float = 0.0

    @property
    def is_active(self) -> bool:
        return self.placement is not None

    def mark_interacted(self) -> None:
        self.is_new = False


@dataclass
class HistoryEntry:
    id: str
    text: str
    cause: HistoryCause
    prompt_used: str | None = None
    active_widget_snapshot: list[tuple[str, str]] | None = None
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if self.cause is HistoryCause.REPHRASE and not self.active_widget_snapshot:
            raise ValueError("rephrase history entries need a widget snapshot")
        if self.cause is HistoryCause.GENERATION and self.prompt_used is None:
            raise ValueError("generation history entries record the prompt used")


@dataclass
class Document:
    text: str = ""
    history: list[HistoryEntry] = field(default_factory=list)

    @property
    def word_count(self) -> int:
        return word_count(self.text)


@dataclass
class Viewport:
    pan_x: float = 0.0
    pan_y: float = 0.0
    zoom: float = 1.0

    def __post_init__(self) -> None:
        if self.zoom <= 0:
            raise ValueError("zoom must be positive")


@dataclass
class Canvas:
    id: str
    name: str
    widgets: list[Widget] = field(default_factory=list)
    document: Document = field(default_factory=Document)
    viewport: Viewport = field(default_factory=Viewport)
    created_at: float = 0.0

    def find_widget(self, widget_id: str) -> Widget | None:
        for widget in self.widgets:
            if widget.id == widget_id:
                return widget
        return None


@dataclass
class Workspace:
    canvases: list[Canvas] = field(default_factory=list)
    active_canvas_id: str = ""
    schema_version: int = SCHEMA_VERSION

    def find_canvas(self, canvas_id: str) -> Canvas | None:
        for canvas in self.canvases:
            if canvas.id == canvas_id:
                return canvas
        return None

    def require_canvas(self, canvas_id: str) -> Canvas:
        canvas = self.find_canvas(canvas_id)
        if canvas is None:
            raise UnknownCanvas(f"no canvas {canvas_id!r}")
        return canvas


class ChatRole(str, Enum):
    USER = "user"
    ASSISTANT = "assistant"


@dataclass
class ChatMessage:
    role: ChatRole
    content: str
    created_at: float = 0.0
    error: str | None = None


@dataclass
class ChatSession:
    id: str
    title: str
    messages: list[ChatMessage] = field(default_factory=list)
    created_at: float = 0.0


@dataclass
class AppState:
    """Everything a snapshot persists: the workspace plus all chats."""

    workspace: Workspace
    chats: list[ChatSession] = field(default_factory=list)

    def find_chat(self, chat_id: str) -> ChatSession | None:
        for chat in self.chats:
            if chat.id == chat_id:
                return chat
        return None

    def require_chat(self, chat_id: str) -> ChatSession:
        chat = self.find_chat(chat_id)
        if chat is None:
            raise UnknownChat(f"no chat {chat_id!r}")
        return chat


@dataclass(frozen=True)
class InteractionEvent:
    ts: float
    session: str
    condition: Condition
    kind: EventKind
    payload: dict


def word_count(text: str) -> int:
    """Count maximal whitespace-delimited runs of non-whitespace characters."""
    return len(text.split())


def active_widgets(canvas: Canvas) -> list[Widget]:
    """Widgets on the canvas, ordered by (creation time, id)."""
    placed = [w for w in canvas.widgets if w.placement is not None]
    placed.sort(key=lambda w: (w.created_at, w.id))
    return placed


def require_widget(canvas: Canvas, widget_id: str) -> Widget:
    widget = canvas.find_widget(widget_id)
    if widget is None:
        raise UnknownWidget(f"no widget {widget_id!r} on canvas {canvas.id!r}")
    return widget


def activate_widget(
    canvas: Canvas,
    widget_id: str,
    x: float,
    y: float,
    width: float = DEFAULT_WIDGET_WIDTH,
    height: float = DEFAULT_WIDGET_HEIGHT,
) -> Canvas:
    """Move a panel widget onto the canvas, making it active."""
    widget = require_widget(canvas, widget_id)
    if widget.placement is not None:
        raise AlreadyOnCanvas(f"widget {widget_id!r} is already on the canvas")
    widget.placement = OnCanvas(x, y, width, height)
    widget.mark_interacted()
    return canvas


def deactivate_widget(canvas: Canvas, widget_id: str) -> Canvas:
    """Move a canvas widget back to the panel; its values are kept."""
    widget = require_widget(canvas, widget_id)
    if widget.placement is None:
        raise NotOnCanvas(f"widget {widget_id!r} is not on the canvas")
    widget.placement = None
    return canvas


def append_history(document: Document, entry: HistoryEntry) -> None:
    """Append-only: history entries are never rewritten or removed."""
    if document.history and entry.timestamp < document.history[-1].timestamp:
        raise ValueError("history timestamps must be nondecreasing")
    document.history.append(entry)


def commit_text(document: Document, text: str, entry: HistoryEntry) -> None:
    if entry.text != text:
        raise ValueError("history entry must snapshot the committed text")
    append_history(document, entry)
    document.text = text


def copy_canvas(
    workspace: Workspace,
    canvas_id: str,
    *,
    id_factory: Callable[[], str] = new_id,
    now: float = 0.0,
) -> tuple[Workspace, str]:
    """Deep-copy a canvas: fresh ids throughout, name suffixed " (copy)"."""
    source = workspace.require_canvas(canvas_id)
    widgets = [
        Widget(
            id=id_factory(),
            title=w.title,
            value=w.value,
            suggested_values=list(w.suggested_values),
            saved_values=list(w.saved_values),
            origin=w.origin,
            placement=w.placement,
            is_new=w.is_new,
            created_at=w.created_at,
        )
        for w in source.widgets
    ]
    history = [
        HistoryEntry(
            id=id_factory(),
            text=e.text,
            cause=e.cause,
            prompt_used=e.prompt_used,
            active_widget_snapshot=(
                list(e.active_widget_snapshot)
                if e.active_widget_snapshot is not None
                else None
            ),
            timestamp=e.timestamp,
        )
        for e in source.document.history
    ]
    copy = Canvas(
        id=id_factory(),
        name=source.name + " (copy)",
        widgets=widgets,
        document=Document(text=source.document.text, history=history),
        viewport=Viewport(
            source.viewport.pan_x, source.viewport.pan_y, source.viewport.zoom
        ),
        created_at=now,
    )
    workspace.canvases.append(copy)
    return workspace, copy.id
