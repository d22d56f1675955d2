"""Shared test helpers: random state builders and independent oracles."""

from __future__ import annotations

import itertools
import random

from draftcanvas.model import (
    AppState,
    Canvas,
    ChatMessage,
    ChatRole,
    ChatSession,
    Document,
    HistoryCause,
    HistoryEntry,
    OnCanvas,
    Viewport,
    Widget,
    WidgetOrigin,
    Workspace,
)

_WORDS = [
    "river", "ridge", "ember", "quiet", "Sierra", "Brook", "wilderness",
    "survival", "trail", "compass", "été", "緑", "shadow", "north",
]


def _text(rng: random.Random, max_words: int = 12) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(0, max_words)))


def _values(rng: random.Random, max_items: int = 4) -> list[str]:
    pool = rng.sample(_WORDS, k=min(len(_WORDS), rng.randint(0, max_items)))
    return [f"{w} {rng.randint(0, 99)}" for w in pool]


def build_widget(rng: random.Random, ids: itertools.count, ts: float) -> Widget:
    origin = rng.choice(list(WidgetOrigin))
    placement = None
    if rng.random() < 0.5:
        placement = OnCanvas(
            x=rng.uniform(-500, 500),
            y=rng.uniform(-500, 500),
            width=rng.uniform(1, 400),
            height=rng.uniform(1, 300),
        )
    return Widget(
        id=f"w{next(ids)}",
        title=rng.choice(["Tone", "Setting Description", "Pacing", "名前", ""]) or "Untitled",
        value=_text(rng, 4),
        suggested_values=_values(rng),
        saved_values=_values(rng),
        origin=origin,
        placement=placement,
        is_new=placement is None
        and origin is not WidgetOrigin.MANUAL
        and rng.random() < 0.5,
        created_at=ts,
    )


def build_history_entry(
    rng: random.Random, ids: itertools.count, ts: float
) -> HistoryEntry:
    cause = rng.choice(list(HistoryCause))
    prompt_used = _text(rng, 6) or "prompt" if cause is HistoryCause.GENERATION else None
    snapshot = None
    if cause is HistoryCause.REPHRASE:
        snapshot = [(rng.choice(_WORDS), _text(rng, 3)) for _ in range(rng.randint(1, 3))]
    return HistoryEntry(
        id=f"h{next(ids)}",
        text=_text(rng, 20),
        cause=cause,
        prompt_used=prompt_used,
        active_widget_snapshot=snapshot,
        timestamp=ts,
    )


def build_state(seed: int) -> AppState:
    """A random but invariant-respecting workspace + chats."""
    rng = random.Random(seed)
    ids = itertools.count()
    clock = itertools.count(1000)
    canvases = []
    for c in range(rng.randint(1, 3)):
        widgets = [
            build_widget(rng, ids, float(next(clock)))
            for _ in range(rng.randint(0, 5))
        ]
        history = [
            build_history_entry(rng, ids, float(next(clock)))
            for _ in range(rng.randint(0, 4))
        ]
        canvases.append(
            Canvas(
                id=f"c{next(ids)}",
                name=_text(rng, 3) or "Canvas",
                widgets=widgets,
                document=Document(text=_text(rng, 30), history=history),
                viewport=Viewport(
                    rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0.1, 4)
                ),
                created_at=float(next(clock)),
            )
        )
    chats = []
    for _ in range(rng.randint(0, 3)):
        messages = []
        for i in range(rng.randint(0, 6)):
            messages.append(
                ChatMessage(
                    role=ChatRole.USER if i % 2 == 0 else ChatRole.ASSISTANT,
                    content=_text(rng, 10) or "hi",
                    created_at=float(next(clock)),
                    error="reply failed" if rng.random() < 0.1 and i % 2 == 0 else None,
                )
            )
        chats.append(
            ChatSession(
                id=f"s{next(ids)}",
                title=_text(rng, 2) or "Chat",
                messages=messages,
                created_at=float(next(clock)),
            )
        )
    active = rng.choice(canvases).id
    return AppState(
        workspace=Workspace(canvases=canvases, active_canvas_id=active), chats=chats
    )


def midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def brute_force_wilcoxon(diffs: list[float]) -> tuple[float, float]:
    """Oracle: W+ and two-sided p by enumerating all 2^n sign patterns."""
    nonzero = [d for d in diffs if d != 0.0]
    n = len(nonzero)
    ranks = midranks([abs(d) for d in nonzero])
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    center = n * (n + 1) / 4
    observed_offset = abs(w_plus - center)
    matching = 0
    for pattern in itertools.product((0, 1), repeat=n):
        w = sum(r for r, bit in zip(ranks, pattern) if bit)
        if abs(w - center) >= observed_offset - 1e-12:
            matching += 1
    return w_plus, matching / 2**n
