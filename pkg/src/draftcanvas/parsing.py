"""Hardened extraction of structured suggestions from model output.

Models wrap JSON in prose, code fences, or both; the parsers here accept
any of that, validate the payload shape, and never crash on arbitrary
input: the outcome is either usable suggestions or MalformedModelOutput.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from draftcanvas.model import DomainError

_FENCE_RE = re.compile(r"```(?:[a-zA-Z0-9_-]+)?\s*\n?(.*?)```", re.DOTALL)


class MalformedModelOutput(DomainError):
    """The model's reply contained no usable suggestion payload."""


@dataclass(frozen=True)
class WidgetSuggestion:
    title: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.title:
            raise ValueError("widget suggestions need a title")
        if not self.values:
            raise ValueError("widget suggestions need at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError("widget suggestion values must be duplicate-free")


def extract_json_array(raw: str) -> list | None:
    """Find the first JSON array in raw text, tolerating fences and prose."""
    candidates = [raw.strip()]
    candidates.extend(match.strip() for match in _FENCE_RE.findall(raw))
    decoder = json.JSONDecoder()
    for candidate in candidates:
        start = candidate.find("[")
        while start != -1:
            try:
                value, _ = decoder.raw_decode(candidate[start:])
            except json.JSONDecodeError:
                start = candidate.find("[", start + 1)
                continue
            if isinstance(value, list):
                return value
            start = candidate.find("[", start + 1)
    return None


def _clean_values(raw_values: object) -> tuple[str, ...]:
    if not isinstance(raw_values, list):
        return ()
    values: list[str] = []
    for item in raw_values:
        if not isinstance(item, str):
            continue
        text = item.strip()
        if text and text not in values:
            values.append(text)
    return tuple(values)


def parse_widget_suggestions(raw: str, expected: int) -> list[WidgetSuggestion]:
    """Parse up to `expected` widget suggestions from model output.

    Items must be objects with a nonempty "title" and a non-empty "values"
    string array; invalid items and duplicate titles are dropped. Raises
    MalformedModelOutput when nothing valid remains.
    """
    array = extract_json_array(raw)
    if array is None:
        raise MalformedModelOutput("no JSON array found in model output")
    suggestions: list[WidgetSuggestion] = []
    seen_titles: set[str] = set()
    for item in array:
        if not isinstance(item, dict):
            continue
        title = item.get("title")
        if not isinstance(title, str) or not title.strip():
            continue
        title = title.strip()
        values = _clean_values(item.get("values"))
        if not values or title in seen_titles:
            continue
        seen_titles.add(title)
        suggestions.append(WidgetSuggestion(title, values))
        if len(suggestions) == expected:
            break
    if not suggestions:
        raise MalformedModelOutput("model output contained no valid suggestions")
    return suggestions


def parse_value_suggestions(raw: str, expected: int) -> list[str]:
    """Parse up to `expected` plain string values from model output."""
    array = extract_json_array(raw)
    if array is None:
        raise MalformedModelOutput("no JSON array found in model output")
    values = list(_clean_values(array))
    if not values:
        raise MalformedModelOutput("model output contained no valid values")
    return values[:expected]
