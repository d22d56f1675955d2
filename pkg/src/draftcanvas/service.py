"""Canvas workbench orchestration: widgets, documents, jobs, and events.

All mutations are serialized through the runtime lock; completions stream
outside the lock and commit their results atomically at the end, so a
failed or cancelled job leaves the workspace untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from draftcanvas.gateway import GatewayError
from draftcanvas.model import (
    Canvas,
    Condition,
    DEFAULT_WIDGET_HEIGHT,
    DEFAULT_WIDGET_WIDTH,
    Document,
    EventKind,
    GenerationInProgress,
    EmptyValue,
    HistoryCause,
    HistoryEntry,
    NotRunning,
    OnCanvas,
    UnknownEntry,
    UnknownJob,
    UnknownWidget,
    Widget,
    WidgetOrigin,
    activate_widget,
    active_widgets,
    commit_text,
    copy_canvas,
    deactivate_widget,
)
from draftcanvas.parsing import parse_value_suggestions, parse_widget_suggestions
from draftcanvas.prompts import (
    PromptBundle,
    PromptConfig,
    Purpose,
    compose_generation,
    compose_rephrase,
    compose_themed_widgets,
    compose_value_suggestions,
    compose_widget_suggestions,
)
from draftcanvas.runtime import Runtime


class JobState(str, Enum):
    RUNNING = "Running"
    DONE = "Done"
    FAILED = "Failed"
    CANCELLED = "Cancelled"


@dataclass
class GenerationJob:
    id: str
    canvas_id: str
    purpose: Purpose
    state: JobState
    started_at: float
    bundle: PromptBundle
    prompt_used: str | None = None
    widget_snapshot: list[tuple[str, str]] | None = None
    final_text: str | None = None
    error: str | None = None
    _cancel_requested: bool = field(default=False, repr=False)
    _consumed: bool = field(default=False, repr=False)


class CanvasService:
    def __init__(self, runtime: Runtime, config: PromptConfig | None = None):
        self.runtime = runtime
        self.config = config or PromptConfig()
        self._jobs: dict[str, GenerationJob] = {}
        self._running: dict[str, str] = {}  # canvas id -> running job id

    # -- canvas management ------------------------------------------------

    @property
    def workspace(self):
        return self.runtime.state.workspace

    def list_canvases(self) -> list[Canvas]:
        with self.runtime.lock:
            return list(self.workspace.canvases)

    def get_canvas(self, canvas_id: str) -> Canvas:
        with self.runtime.lock:
            return self.workspace.require_canvas(canvas_id)

    def create_canvas(self, name: str | None = None) -> Canvas:
        with self.runtime.lock:
            canvas = Canvas(
                id=self.runtime.new_id(),
                name=name or f"Canvas {len(self.workspace.canvases) + 1}",
                created_at=self.runtime.clock.tick(),
            )
            self.workspace.canvases.append(canvas)
            self.workspace.active_canvas_id = canvas.id
            self.runtime.autosave()
            return canvas

    def copy_canvas(self, canvas_id: str) -> Canvas:
        with self.runtime.lock:
            _, new_canvas_id = copy_canvas(
                self.workspace,
                canvas_id,
                id_factory=self.runtime.new_id,
                now=self.runtime.clock.tick(),
            )
            self.runtime.autosave()
            return self.workspace.require_canvas(new_canvas_id)

    def delete_canvas(self, canvas_id: str) -> None:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            self.workspace.canvases.remove(canvas)
            if not self.workspace.canvases:
                replacement = Canvas(
                    id=self.runtime.new_id(),
                    name="Canvas 1",
                    created_at=self.runtime.clock.tick(),
                )
                self.workspace.canvases.append(replacement)
            if self.workspace.active_canvas_id == canvas_id:
                self.workspace.active_canvas_id = self.workspace.canvases[-1].id
            self.runtime.autosave()

    # -- widgets ----------------------------------------------------------

    def locate_widget(self, widget_id: str) -> tuple[Canvas, Widget]:
        for canvas in self.workspace.canvases:
            widget = canvas.find_widget(widget_id)
            if widget is not None:
                return canvas, widget
        raise UnknownWidget(f"no widget {widget_id!r} in the workspace")

    def create_empty_widget(self, canvas_id: str, x: float, y: float) -> Widget:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            widget = Widget(
                id=self.runtime.new_id(),
                origin=WidgetOrigin.MANUAL,
                placement=OnCanvas(x, y),
                is_new=False,
                created_at=self.runtime.clock.tick(),
            )
            canvas.widgets.append(widget)
            self._record(
                EventKind.WIDGET_CREATED,
                {
                    "origin": WidgetOrigin.MANUAL.value,
                    "widgetId": widget.id,
                    "canvasId": canvas.id,
                },
            )
            self.runtime.autosave()
            return widget

    def update_widget(
        self,
        widget_id: str,
        *,
        title: str | None = None,
        value: str | None = None,
        x: float | None = None,
        y: float | None = None,
        width: float | None = None,
        height: float | None = None,
        placement: str | None = None,
        clear_new: bool = True,
    ) -> Widget:
        """Apply a partial update; placement moves between panel and canvas."""
        if placement not in (None, "panel", "canvas"):
            raise ValueError(f"placement must be 'panel' or 'canvas', got {placement!r}")
        with self.runtime.lock:
            canvas, widget = self.locate_widget(widget_id)
            if title is not None:
                widget.title = title
            if value is not None:
                widget.value = value
            if placement == "canvas" and widget.placement is None:
                activate_widget(
                    canvas,
                    widget_id,
                    x if x is not None else 0.0,
                    y if y is not None else 0.0,
                    width if width is not None else DEFAULT_WIDGET_WIDTH,
                    height if height is not None else DEFAULT_WIDGET_HEIGHT,
                )
                self._record(
                    EventKind.WIDGET_ACTIVATED,
                    {"widgetId": widget.id, "canvasId": canvas.id},
                )
            elif placement == "panel" and widget.placement is not None:
                deactivate_widget(canvas, widget_id)
            elif widget.placement is not None and any(
                v is not None for v in (x, y, width, height)
            ):
                current = widget.placement
                widget.placement = OnCanvas(
                    x if x is not None else current.x,
                    y if y is not None else current.y,
                    width if width is not None else current.width,
                    height if height is not None else current.height,
                )
            if clear_new:
                widget.mark_interacted()
            self.runtime.autosave()
            return widget

    def delete_widget(self, widget_id: str) -> None:
        with self.runtime.lock:
            canvas, widget = self.locate_widget(widget_id)
            canvas.widgets.remove(widget)
            self._record(
                EventKind.WIDGET_DELETED,
                {"widgetId": widget.id, "canvasId": canvas.id},
            )
            self.runtime.autosave()

    def save_widget_value(self, widget_id: str) -> Widget:
        with self.runtime.lock:
            _, widget = self.locate_widget(widget_id)
            if not widget.value:
                raise EmptyValue("there is no current value to save")
            if widget.value not in widget.saved_values:
                widget.saved_values.append(widget.value)
            self.runtime.autosave()
            return widget

    # -- suggestions ------------------------------------------------------

    def request_widget_suggestions(self, canvas_id: str) -> list[Widget]:
        count = self.config.widget_suggestion_count
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            bundle = compose_widget_suggestions(
                canvas.document.text, count, self.config
            )
        raw = self.runtime.completer(bundle).drain()
        suggestions = parse_widget_suggestions(raw, count)
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            widgets = []
            for suggestion in suggestions:
                widget = Widget(
                    id=self.runtime.new_id(),
                    title=suggestion.title,
                    value=suggestion.values[0],
                    suggested_values=list(suggestion.values),
                    origin=WidgetOrigin.SYSTEM_SUGGESTED,
                    placement=None,
                    is_new=True,
                    created_at=self.runtime.clock.tick(),
                )
                canvas.widgets.append(widget)
                widgets.append(widget)
                self._record(
                    EventKind.WIDGET_CREATED,
                    {
                        "origin": WidgetOrigin.SYSTEM_SUGGESTED.value,
                        "widgetId": widget.id,
                        "canvasId": canvas.id,
                    },
                )
            self._record(
                EventKind.SUGGESTION_REQUESTED,
                {"scope": "Panel", "canvasId": canvas.id},
            )
            self.runtime.autosave()
            return widgets

    def request_themed_widgets(self, canvas_id: str, theme: str) -> list[Widget]:
        count = self.config.themed_widget_count
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            bundle = compose_themed_widgets(
                theme, canvas.document.text, count, self.config
            )
        raw = self.runtime.completer(bundle).drain()
        suggestions = parse_widget_suggestions(raw, count)
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            widgets = []
            for suggestion in suggestions:
                widget = Widget(
                    id=self.runtime.new_id(),
                    title=suggestion.title,
                    value=suggestion.values[0],
                    suggested_values=list(suggestion.values),
                    origin=WidgetOrigin.THEMED_PROMPT,
                    placement=None,
                    is_new=True,
                    created_at=self.runtime.clock.tick(),
                )
                canvas.widgets.append(widget)
                widgets.append(widget)
                self._record(
                    EventKind.WIDGET_CREATED,
                    {
                        "origin": WidgetOrigin.THEMED_PROMPT.value,
                        "widgetId": widget.id,
                        "canvasId": canvas.id,
                        "theme": theme,
                    },
                )
            self.runtime.autosave()
            return widgets

    def request_value_suggestions(self, widget_id: str) -> Widget:
        count = self.config.value_suggestion_count
        with self.runtime.lock:
            canvas, widget = self.locate_widget(widget_id)
            bundle = compose_value_suggestions(
                widget, canvas.document.text, count, self.config
            )
        raw = self.runtime.completer(bundle).drain()
        values = parse_value_suggestions(raw, count)
        with self.runtime.lock:
            _, widget = self.locate_widget(widget_id)
            for value in values:
                value = value.strip()
                if value and value not in widget.suggested_values:
                    widget.suggested_values.append(value)
            self._record(
                EventKind.SUGGESTION_REQUESTED,
                {"scope": "InWidget", "widgetId": widget.id},
            )
            self.runtime.autosave()
            return widget

    # -- documents and history ---------------------------------------------

    def update_document(self, canvas_id: str, text: str) -> Document:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            if text != canvas.document.text:
                entry = HistoryEntry(
                    id=self.runtime.new_id(),
                    text=text,
                    cause=HistoryCause.USER_EDIT,
                    timestamp=self.runtime.clock.tick(),
                )
                commit_text(canvas.document, text, entry)
                self.runtime.autosave()
            return canvas.document

    def history(self, canvas_id: str) -> list[HistoryEntry]:
        with self.runtime.lock:
            return list(self.workspace.require_canvas(canvas_id).document.history)

    def revert_history(self, canvas_id: str, entry_id: str) -> Document:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            target = next(
                (e for e in canvas.document.history if e.id == entry_id), None
            )
            if target is None:
                raise UnknownEntry(f"no history entry {entry_id!r}")
            entry = HistoryEntry(
                id=self.runtime.new_id(),
                text=target.text,
                cause=HistoryCause.REVERT,
                timestamp=self.runtime.clock.tick(),
            )
            commit_text(canvas.document, target.text, entry)
            self._record(
                EventKind.HISTORY_REVERTED,
                {"entryId": entry_id, "canvasId": canvas.id},
            )
            self.runtime.autosave()
            return canvas.document

    # -- generation jobs ----------------------------------------------------

    def generate_text(self, canvas_id: str, prompt: str) -> GenerationJob:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            self._ensure_no_running_job(canvas_id)
            bundle = compose_generation(
                canvas.document.text, prompt, active_widgets(canvas), self.config
            )
            return self._start_job(canvas_id, bundle, prompt_used=prompt)

    def rephrase_text(self, canvas_id: str) -> GenerationJob:
        with self.runtime.lock:
            canvas = self.workspace.require_canvas(canvas_id)
            self._ensure_no_running_job(canvas_id)
            constrained = [w for w in active_widgets(canvas) if w.value]
            bundle = compose_rephrase(canvas.document.text, constrained, self.config)
            snapshot = [(w.title, w.value) for w in constrained]
            return self._start_job(canvas_id, bundle, widget_snapshot=snapshot)

    def get_job(self, job_id: str) -> GenerationJob:
        job = self._jobs.get(job_id)
        if job is None:
            raise UnknownJob(f"no job {job_id!r}")
        return job

    def cancel_job(self, job_id: str) -> GenerationJob:
        with self.runtime.lock:
            job = self.get_job(job_id)
            if job.state is not JobState.RUNNING:
                raise NotRunning(f"job {job_id!r} is {job.state.value}")
            job._cancel_requested = True
            job.state = JobState.CANCELLED
            self._running.pop(job.canvas_id, None)
            return job

    def stream_job(self, job_id: str) -> Iterator[str]:
        """Consume a job's chunk stream; commits the result on completion.

        Single-consumer. Dropping the iterator cancels the job; a gateway
        failure marks it failed and re-raises. Nothing is committed unless
        the stream finishes cleanly and no cancellation arrived first.
        """
        job = self.get_job(job_id)
        with self.runtime.lock:
            if job._consumed:
                raise RuntimeError(f"job {job_id!r} already has a consumer")
            job._consumed = True
        return self._pump(job)

    def run_job(self, job: GenerationJob) -> str:
        """Drain a job to completion and return the final text."""
        for _ in self.stream_job(job.id):
            pass
        if job.state is JobState.DONE and job.final_text is not None:
            return job.final_text
        raise RuntimeError(f"job finished in state {job.state.value}")

    # -- internals ----------------------------------------------------------

    def _record(self, kind: EventKind, payload: dict) -> None:
        self.runtime.record(Condition.DYNAMIC_UI, kind, payload)

    def _ensure_no_running_job(self, canvas_id: str) -> None:
        running_id = self._running.get(canvas_id)
        if running_id is not None:
            raise GenerationInProgress(
                f"canvas {canvas_id!r} already has running job {running_id!r}"
            )

    def _start_job(
        self,
        canvas_id: str,
        bundle: PromptBundle,
        *,
        prompt_used: str | None = None,
        widget_snapshot: list[tuple[str, str]] | None = None,
    ) -> GenerationJob:
        job = GenerationJob(
            id=self.runtime.new_id(),
            canvas_id=canvas_id,
            purpose=bundle.purpose,
            state=JobState.RUNNING,
            started_at=self.runtime.clock.tick(),
            bundle=bundle,
            prompt_used=prompt_used,
            widget_snapshot=widget_snapshot,
        )
        self._jobs[job.id] = job
        self._running[canvas_id] = job.id
        return job

    def _pump(self, job: GenerationJob) -> Iterator[str]:
        stream = self.runtime.completer(job.bundle)
        try:
            for chunk in stream:
                if job._cancel_requested:
                    stream.close()
                    return
                yield chunk
        except GeneratorExit:
            stream.close()
            self._finish_cancelled(job)
            raise
        except GatewayError as exc:
            self._finish_failed(job, exc)
            raise
        self._commit(job, stream.final_text)

    def _finish_cancelled(self, job: GenerationJob) -> None:
        with self.runtime.lock:
            if job.state is JobState.RUNNING:
                job.state = JobState.CANCELLED
            self._running.pop(job.canvas_id, None)

    def _finish_failed(self, job: GenerationJob, exc: Exception) -> None:
        with self.runtime.lock:
            if job.state is JobState.RUNNING:
                job.state = JobState.FAILED
                job.error = str(exc)
            self._running.pop(job.canvas_id, None)

    def _commit(self, job: GenerationJob, final_text: str) -> None:
        with self.runtime.lock:
            if job._cancel_requested or job.state is not JobState.RUNNING:
                self._running.pop(job.canvas_id, None)
                return
            canvas = self.workspace.find_canvas(job.canvas_id)
            if canvas is None:
                job.state = JobState.FAILED
                job.error = "canvas deleted while generating"
                self._running.pop(job.canvas_id, None)
                return
            if job.purpose is Purpose.GENERATE:
                entry = HistoryEntry(
                    id=self.runtime.new_id(),
                    text=final_text,
                    cause=HistoryCause.GENERATION,
                    prompt_used=job.prompt_used,
                    timestamp=self.runtime.clock.tick(),
                )
                event_kind = EventKind.PROMPT_SUBMITTED
                payload = {"prompt": job.prompt_used, "canvasId": canvas.id}
            else:
                entry = HistoryEntry(
                    id=self.runtime.new_id(),
                    text=final_text,
                    cause=HistoryCause.REPHRASE,
                    active_widget_snapshot=list(job.widget_snapshot or []),
                    timestamp=self.runtime.clock.tick(),
                )
                event_kind = EventKind.REPHRASE_REQUESTED
                payload = {
                    "canvasId": canvas.id,
                    "constraintCount": len(job.widget_snapshot or []),
                }
            commit_text(canvas.document, final_text, entry)
            job.state = JobState.DONE
            job.final_text = final_text
            self._running.pop(job.canvas_id, None)
            self._record(event_kind, payload)
            self.runtime.autosave()
