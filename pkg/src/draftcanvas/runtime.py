"""Shared plumbing for the canvas and chat services.

One mutation lock, one strictly increasing clock, one event sink, and one
autosave hook; both services commit through here so snapshots and the
event journal always agree.
"""

from __future__ import annotations

import threading
import time
from typing import Callable

from draftcanvas.gateway import CompletionStream
from draftcanvas.model import (
    AppState,
    Condition,
    EventKind,
    InteractionEvent,
    new_id,
)
from draftcanvas.persistence import EventLog, SnapshotStore
from draftcanvas.prompts import PromptBundle

Completer = Callable[[PromptBundle], CompletionStream]


class Clock:
    """Wall-clock timestamps forced to be strictly increasing."""

    def __init__(self) -> None:
        self._last = 0.0
        self._lock = threading.Lock()

    def advance_past(self, timestamp: float) -> None:
        with self._lock:
            self._last = max(self._last, timestamp)

    def tick(self) -> float:
        with self._lock:
            now = time.time()
            if now <= self._last:
                now = self._last + 1e-6
            self._last = now
            return now


class Runtime:
    def __init__(
        self,
        state: AppState,
        completer: Completer,
        *,
        snapshots: SnapshotStore | None = None,
        events: EventLog | None = None,
        session_id: str | None = None,
    ):
        self.state = state
        self.completer = completer
        self.snapshots = snapshots
        self.events = events
        self.session_id = session_id or new_id()
        self.lock = threading.RLock()
        self.clock = Clock()
        self.recorded: list[InteractionEvent] = []
        for canvas in state.workspace.canvases:
            self.clock.advance_past(canvas.created_at)
            for widget in canvas.widgets:
                self.clock.advance_past(widget.created_at)
            for entry in canvas.document.history:
                self.clock.advance_past(entry.timestamp)
        for chat in state.chats:
            for message in chat.messages:
                self.clock.advance_past(message.created_at)

    def new_id(self) -> str:
        return new_id()

    def record(self, condition: Condition, kind: EventKind, payload: dict) -> None:
        event = InteractionEvent(
            ts=self.clock.tick(),
            session=self.session_id,
            condition=condition,
            kind=kind,
            payload=payload,
        )
        self.recorded.append(event)
        if self.events is not None:
            self.events.append(event)

    def autosave(self) -> None:
        if self.snapshots is not None:
            self.snapshots.save(self.state)

    def export_events(self, since: float | None = None) -> list[dict]:
        """Event records for the export endpoint (file-backed when present)."""
        if self.events is not None:
            return self.events.read_raw(since)
        from draftcanvas.serialization import event_to_dict

        records = [event_to_dict(e) for e in self.recorded]
        if since is not None:
            records = [r for r in records if r["ts"] > since]
        return records
