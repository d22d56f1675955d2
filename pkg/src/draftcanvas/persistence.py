"""Durable storage: one JSON snapshot plus an append-only JSONL event log.

Desk-scale by design: a single inspectable snapshot file written
atomically (temp file + rename, previous version kept as .bak) and an
event journal flushed on every append.
"""

from __future__ import annotations

import errno
import json
import logging
import os
import tempfile
import time
from pathlib import Path
from typing import Callable

from draftcanvas.model import (
    AppState,
    Canvas,
    InteractionEvent,
    SCHEMA_VERSION,
    Workspace,
    new_id,
)
from draftcanvas.serialization import (
    event_from_dict,
    event_to_dict,
    state_from_dict,
    state_to_dict,
)

logger = logging.getLogger(__name__)

SNAPSHOT_FILENAME = "snapshot.json"
EVENTS_FILENAME = "events.jsonl"


class PersistenceError(Exception):
    pass


class CorruptSnapshot(PersistenceError):
    """The snapshot exists but cannot be decoded; never silently reset."""


class UnsupportedSchemaVersion(PersistenceError):
    pass


class StorageFull(PersistenceError):
    pass


class PermissionDenied(PersistenceError):
    pass


_MIGRATIONS: dict[int, Callable[[dict], dict]] = {}


def register_migration(from_version: int, migrate: Callable[[dict], dict]) -> None:
    """Register an upgrade step from `from_version` to `from_version + 1`."""
    _MIGRATIONS[from_version] = migrate


def _translate_os_error(exc: OSError) -> PersistenceError:
    if exc.errno == errno.ENOSPC:
        return StorageFull(str(exc))
    if exc.errno in (errno.EACCES, errno.EPERM):
        return PermissionDenied(str(exc))
    return PersistenceError(str(exc))


def fresh_state() -> AppState:
    """Cold-start state: one empty canvas, no chats."""
    canvas = Canvas(id=new_id(), name="Canvas 1", created_at=time.time())
    return AppState(
        workspace=Workspace(canvases=[canvas], active_canvas_id=canvas.id)
    )


class SnapshotStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.path = self.data_dir / SNAPSHOT_FILENAME
        self.backup_path = self.path.with_suffix(".json.bak")

    def save(self, state: AppState) -> None:
        """Atomically persist the state; the previous snapshot becomes .bak."""
        payload = state_to_dict(state, saved_at=time.time(),
                                schema_version=SCHEMA_VERSION)
        encoded = json.dumps(payload, indent=2, sort_keys=True)
        try:
            fd, tmp_name = tempfile.mkstemp(
                prefix=".snapshot-", suffix=".json", dir=self.data_dir
            )
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(encoded)
                    handle.flush()
                    os.fsync(handle.fileno())
                if self.path.exists():
                    self.backup_path.write_bytes(self.path.read_bytes())
                os.replace(tmp_name, self.path)
            finally:
                if os.path.exists(tmp_name):
                    os.unlink(tmp_name)
        except OSError as exc:
            raise _translate_os_error(exc) from exc

    def load(self) -> AppState:
        """Load the snapshot, or a fresh state when none exists yet."""
        if not self.path.exists():
            return fresh_state()
        try:
            raw = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise _translate_os_error(exc) from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorruptSnapshot(f"{self.path}: {exc}") from exc
        if not isinstance(data, dict) or "schemaVersion" not in data:
            raise CorruptSnapshot(f"{self.path}: not a snapshot document")
        data = _migrate(data)
        try:
            return state_from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptSnapshot(f"{self.path}: {exc}") from exc


def _migrate(data: dict) -> dict:
    version = data["schemaVersion"]
    if not isinstance(version, int):
        raise CorruptSnapshot(f"schemaVersion {version!r} is not an integer")
    if version > SCHEMA_VERSION:
        raise UnsupportedSchemaVersion(
            f"snapshot schema {version} is newer than supported {SCHEMA_VERSION}"
        )
    while version < SCHEMA_VERSION:
        if version not in _MIGRATIONS:
            raise UnsupportedSchemaVersion(
                f"no migration registered from schema {version}"
            )
        data = _MIGRATIONS[version](data)
        new_version = data.get("schemaVersion")
        if new_version != version + 1:
            raise UnsupportedSchemaVersion(
                f"migration from {version} produced schema {new_version!r}"
            )
        version = new_version
    return data


class EventLog:
    """Append-only JSONL journal; one flushed line per interaction."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: InteractionEvent) -> None:
        line = json.dumps(event_to_dict(event), sort_keys=True)
        try:
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
        except OSError as exc:
            raise _translate_os_error(exc) from exc

    def read(self, since: float | None = None) -> list[InteractionEvent]:
        """Parse all events; a torn final line is skipped with a warning."""
        events: list[InteractionEvent] = []
        for record in self.read_raw(since):
            events.append(event_from_dict(record))
        return events

    def read_raw(self, since: float | None = None) -> list[dict]:
        if not self.path.exists():
            return []
        records: list[dict] = []
        with self.path.open("r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.strip()
                if not text:
                    continue
                try:
                    record = json.loads(text)
                except json.JSONDecodeError:
                    logger.warning(
                        "%s: skipping unparseable event line %d", self.path, lineno
                    )
                    continue
                if since is not None and float(record.get("ts", 0.0)) <= since:
                    continue
                records.append(record)
        return records
