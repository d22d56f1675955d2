"""Interaction-event analytics over the JSONL activity log."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable

logger = logging.getLogger(__name__)


@dataclass
class SessionSummary:
    """Per-session, per-condition counts of logged interactions."""

    session: str
    condition: str
    kinds: dict[str, int] = field(default_factory=dict)
    widgets_created: dict[str, int] = field(default_factory=dict)
    suggestions_requested: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.kinds.values())


def event_log_summary(lines: Iterable[str]) -> list[SessionSummary]:
    """Summarize a JSONL event stream per (session, condition).

    Counts every event kind, plus widget creations broken down by origin
    and suggestion requests broken down by scope. Unparseable lines (e.g.
    a torn final line after a crash) are skipped with a warning.
    """
    summaries: dict[tuple[str, str], SessionSummary] = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError:
            logger.warning("skipping unparseable event line %d", lineno)
            continue
        if not isinstance(record, dict) or "kind" not in record:
            logger.warning("skipping malformed event record on line %d", lineno)
            continue
        session = str(record.get("session", ""))
        condition = str(record.get("condition", ""))
        key = (session, condition)
        if key not in summaries:
            summaries[key] = SessionSummary(session, condition)
        summary = summaries[key]
        kind = str(record["kind"])
        summary.kinds[kind] = summary.kinds.get(kind, 0) + 1
        payload = record.get("payload") or {}
        if kind == "WidgetCreated":
            origin = str(payload.get("origin", "unknown"))
            summary.widgets_created[origin] = (
                summary.widgets_created.get(origin, 0) + 1
            )
        elif kind == "SuggestionRequested":
            scope = str(payload.get("scope", "unknown"))
            summary.suggestions_requested[scope] = (
                summary.suggestions_requested.get(scope, 0) + 1
            )
    return list(summaries.values())
