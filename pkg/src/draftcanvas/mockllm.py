"""Deterministic stand-in for the completion endpoint.

Output is a pure function of (seed, bundle messages, bundle purpose), so
tests and demos replay byte-identically offline. Suggestion replies come
from fixed vocabularies; generation replies embed every constraint value
verbatim so uptake can be asserted.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from typing import Iterator

from draftcanvas.gateway import CompletionStream
from draftcanvas.prompts import (
    CONSTRAINTS_DELIMITER,
    PromptBundle,
    Purpose,
)

WIDGET_TITLES = (
    "Survival Challenge",
    "Setting Description",
    "Narrative Tone",
    "Story Pacing",
    "Point of View",
    "Opening Hook",
    "Sensory Detail",
    "Stakes and Tension",
)

THEMED_TITLES = (
    "Character's Connection with Nature",
    "Character Survival Skills",
    "Character Emotional State",
    "Character Backstory",
    "Character Voice",
    "Character Motivation",
)

FACET_VALUES = {
    "Survival Challenge": (
        "Flash flood",
        "Predator encounter",
        "Dwindling supplies",
        "Sudden blizzard",
        "Broken compass",
        "Poisonous berries",
    ),
    "Setting Description": (
        "Misty mountain range",
        "Remote island atoll",
        "Dense rainforest",
        "Frozen tundra",
        "Storm-swept coastline",
        "High desert plateau",
    ),
    "Narrative Tone": ("Hopeful", "Grim", "Wry", "Elegiac"),
    "Character Emotional State": ("Resolute", "Panicked", "Numb", "Defiant"),
}

_OPENINGS = (
    "The morning broke thin and gray over the treeline.",
    "Nobody remembered exactly when the trail had vanished.",
    "By the third day, the map had stopped making sense.",
    "The river spoke first, long before anyone saw it.",
)

_FILLERS = (
    "Every sound in the undergrowth carried a question.",
    "Hunger sharpened the hours into something countable.",
    "The light moved, and the shadows moved against it.",
    "What was left of the plan fit in a single pocket.",
)

_CLOSINGS = (
    "Whatever came next would have to be earned.",
    "For now, that was enough.",
    "The wilderness kept its own ledger.",
    "Somewhere ahead, the story continued without asking.",
)

_COUNT_RE = re.compile(r"exactly (\d+)")
_FACET_RE = re.compile(r'writing facet "(.+?)"')
_CONSTRAINT_LINE_RE = re.compile(r"^- (.+?): (.+)$")


def _rng_for(bundle: PromptBundle, seed: int) -> random.Random:
    digest = hashlib.sha256()
    digest.update(str(seed).encode())
    digest.update(bundle.purpose.value.encode())
    for role, content in bundle.messages:
        digest.update(b"\x00")
        digest.update(role.value.encode())
        digest.update(b"\x00")
        digest.update(content.encode())
    return random.Random(int.from_bytes(digest.digest()[:8], "big"))


def _requested_count(text: str, default: int = 3) -> int:
    match = _COUNT_RE.search(text)
    return int(match.group(1)) if match else default


def _excluded_values(text: str) -> list[str]:
    excluded: list[str] = []
    collecting = False
    for line in text.splitlines():
        if line.startswith("Do not repeat"):
            collecting = True
            continue
        if collecting:
            if line.startswith("- "):
                excluded.append(line[2:])
            else:
                break
    return excluded


def _constraint_values(text: str) -> list[str]:
    values: list[str] = []
    collecting = False
    for line in text.splitlines():
        if line == CONSTRAINTS_DELIMITER:
            collecting = True
            continue
        if collecting:
            match = _CONSTRAINT_LINE_RE.match(line)
            if match:
                values.append(match.group(2))
            else:
                break
    return values


def _values_for(title: str, count: int, excluded: list[str]) -> list[str]:
    pool = list(FACET_VALUES.get(title, ()))
    pool.extend(f"{title} idea {i}" for i in range(1, count + len(excluded) + 3))
    fresh = [v for v in pool if v not in excluded]
    return fresh[:count]


def _suggestion_payload(bundle: PromptBundle) -> str:
    prompt = bundle.user_text
    count = _requested_count(prompt)
    titles = (
        THEMED_TITLES
        if bundle.purpose is Purpose.SUGGEST_THEMED_WIDGETS
        else WIDGET_TITLES
    )
    items = [
        {"title": title, "values": _values_for(title, 2, [])}
        for title in titles[:count]
    ]
    return json.dumps(items, indent=1)


def _value_payload(bundle: PromptBundle) -> str:
    prompt = bundle.user_text
    count = _requested_count(prompt)
    match = _FACET_RE.search(prompt)
    title = match.group(1) if match else "Idea"
    return json.dumps(_values_for(title, count, _excluded_values(prompt)))


def _prose_payload(bundle: PromptBundle, rng: random.Random) -> str:
    sentences = [rng.choice(_OPENINGS)]
    for value in _constraint_values(bundle.user_text):
        sentences.append(f"Through it all, {value} pressed into every decision.")
    sentences.append(rng.choice(_FILLERS))
    sentences.append(rng.choice(_FILLERS))
    sentences.append(rng.choice(_CLOSINGS))
    return " ".join(sentences)


def _chunked(text: str, rng: random.Random) -> Iterator[str]:
    position = 0
    while position < len(text):
        size = rng.randint(5, 19)
        yield text[position : position + size]
        position += size


def mock_complete(bundle: PromptBundle, seed: int = 0) -> CompletionStream:
    """Deterministic completion stream for any bundle."""
    rng = _rng_for(bundle, seed)
    if bundle.purpose in (Purpose.SUGGEST_WIDGETS, Purpose.SUGGEST_THEMED_WIDGETS):
        text = _suggestion_payload(bundle)
    elif bundle.purpose is Purpose.SUGGEST_VALUES:
        text = _value_payload(bundle)
    else:
        text = _prose_payload(bundle, rng)
    return CompletionStream(_chunked(text, rng))
