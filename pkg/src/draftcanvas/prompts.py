"""Deterministic rendering of every model request the workbench makes.

All composers are pure: identical inputs produce byte-identical bundles.
Template wording is versioned so golden tests stay stable; see
docs/prompt_templates.md for the full reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from draftcanvas.model import DomainError, Widget

TEMPLATE_VERSION = "v1"

SYSTEM_MESSAGE = (
    "You are a careful writing assistant. You help draft, rewrite, and refine "
    "prose, and you follow the writer's instructions and constraints exactly."
)

CONSTRAINTS_DELIMITER = "=== CONSTRAINTS ==="
DOCUMENT_DELIMITER = "=== DOCUMENT ==="
THEME_DELIMITER = "=== THEME ==="

WIDGET_JSON_CONTRACT = (
    'Respond with only a JSON array of exactly {count} objects, each having '
    'keys "title" (a string) and "values" (a non-empty array of strings).'
)
VALUE_JSON_CONTRACT = "Respond with only a JSON array of exactly {count} strings."


class EmptyPrompt(DomainError):
    pass


class EmptyDocument(DomainError):
    pass


class EmptyTheme(DomainError):
    pass


class NoActiveConstraints(DomainError):
    pass


class DocumentTooLarge(DomainError):
    pass


class InvalidCount(DomainError):
    pass


class Purpose(str, Enum):
    GENERATE = "Generate"
    REPHRASE = "Rephrase"
    SUGGEST_WIDGETS = "SuggestWidgets"
    SUGGEST_THEMED_WIDGETS = "SuggestThemedWidgets"
    SUGGEST_VALUES = "SuggestValues"


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class Decoding:
    temperature: float
    max_tokens: int

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be nonnegative")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple[tuple[Role, str], ...]
    decoding: Decoding
    purpose: Purpose

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("bundles carry at least one message")
        if self.messages[0][0] is not Role.SYSTEM:
            raise ValueError("the first message must set the system role")

    @property
    def user_text(self) -> str:
        return "\n".join(c for r, c in self.messages if r is Role.USER)


@dataclass(frozen=True)
class PromptConfig:
    """Knobs for composition; counts default to the walkthrough scenario."""

    document_char_budget: int = 24000
    widget_suggestion_count: int = 4
    themed_widget_count: int = 3
    value_suggestion_count: int = 2
    generation_temperature: float = 0.7
    suggestion_temperature: float = 0.9
    generation_max_tokens: int = 1024
    suggestion_max_tokens: int = 512

    def generation_decoding(self) -> Decoding:
        return Decoding(self.generation_temperature, self.generation_max_tokens)

    def suggestion_decoding(self) -> Decoding:
        return Decoding(self.suggestion_temperature, self.suggestion_max_tokens)


DEFAULT_PROMPT_CONFIG = PromptConfig()


def render_constraint_block(active: Sequence[Widget]) -> str:
    """One `- title: value` line per valued widget, in (createdAt, id) order.

    Widgets with an empty value express no preference and are omitted.
    """
    ordered = sorted(active, key=lambda w: (w.created_at, w.id))
    lines = [f"- {w.title}: {w.value}" for w in ordered if w.value]
    return "\n".join(lines)


def _check_budget(document_text: str, config: PromptConfig) -> None:
    if len(document_text) > config.document_char_budget:
        raise DocumentTooLarge(
            f"document is {len(document_text)} characters; the configured "
            f"budget is {config.document_char_budget} (no silent truncation)"
        )


def _bundle(user_text: str, decoding: Decoding, purpose: Purpose) -> PromptBundle:
    return PromptBundle(
        messages=((Role.SYSTEM, SYSTEM_MESSAGE), (Role.USER, user_text)),
        decoding=decoding,
        purpose=purpose,
    )


def compose_generation(
    document_text: str,
    user_prompt: str,
    active: Sequence[Widget],
    config: PromptConfig = DEFAULT_PROMPT_CONFIG,
) -> PromptBundle:
    """Render a text-generation request: prompt, constraints, then document."""
    if not user_prompt.strip():
        raise EmptyPrompt("generation needs a nonempty prompt")
    _check_budget(document_text, config)
    parts = [user_prompt]
    block = render_constraint_block(active)
    if block:
        parts.append(f"{CONSTRAINTS_DELIMITER}\n{block}")
    if document_text:
        parts.append(f"{DOCUMENT_DELIMITER}\n{document_text}")
    return _bundle("\n\n".join(parts), config.generation_decoding(), Purpose.GENERATE)


def compose_rephrase(
    document_text: str,
    active: Sequence[Widget],
    config: PromptConfig = DEFAULT_PROMPT_CONFIG,
) -> PromptBundle:
    """Render a rewrite request constrained by the active widgets."""
    if not document_text.strip():
        raise EmptyDocument("there is no document text to rephrase")
    _check_budget(document_text, config)
    block = render_constraint_block(active)
    if not block:
        raise NoActiveConstraints(
            "rephrasing needs at least one active widget with a value"
        )
    user_text = (
        "Rewrite the document below so that it satisfies every constraint "
        "line, while preserving narrative content that no constraint governs.\n\n"
        f"{CONSTRAINTS_DELIMITER}\n{block}\n\n"
        f"{DOCUMENT_DELIMITER}\n{document_text}"
    )
    return _bundle(user_text, config.generation_decoding(), Purpose.REPHRASE)


def compose_widget_suggestions(
    document_text: str,
    count: int,
    config: PromptConfig = DEFAULT_PROMPT_CONFIG,
) -> PromptBundle:
    """Ask for `count` widget suggestions as a strict JSON array."""
    if count < 1:
        raise InvalidCount(f"suggestion count must be >= 1, got {count}")
    _check_budget(document_text, config)
    contract = WIDGET_JSON_CONTRACT.format(count=count)
    if document_text:
        user_text = (
            f"Analyze the document below and propose exactly {count} control "
            "widgets tailored to it. Each widget names one facet of the writing "
            "(for example tone, setting, or pacing) and offers candidate "
            f"values.\n{contract}\n\n"
            f"{DOCUMENT_DELIMITER}\n{document_text}"
        )
    else:
        user_text = (
            f"Propose exactly {count} control widgets for a generic piece of "
            "writing. Each widget names one facet of the writing (for example "
            "tone, setting, or pacing) and offers candidate values.\n"
            f"{contract}"
        )
    return _bundle(user_text, config.suggestion_decoding(), Purpose.SUGGEST_WIDGETS)


def compose_themed_widgets(
    theme: str,
    document_text: str,
    count: int,
    config: PromptConfig = DEFAULT_PROMPT_CONFIG,
) -> PromptBundle:
    """As compose_widget_suggestions, focused on a writer-supplied theme."""
    if not theme.strip():
        raise EmptyTheme("themed widget creation needs a nonempty theme")
    if count < 1:
        raise InvalidCount(f"suggestion count must be >= 1, got {count}")
    _check_budget(document_text, config)
    contract = WIDGET_JSON_CONTRACT.format(count=count)
    user_text = (
        f"Propose exactly {count} control widgets focused on the theme below"
        + (", tailored to the document that follows it" if document_text else "")
        + ". Each widget names one facet of the writing and offers candidate "
        f"values.\n{contract}\n\n"
        f"{THEME_DELIMITER}\n{theme}"
    )
    if document_text:
        user_text += f"\n\n{DOCUMENT_DELIMITER}\n{document_text}"
    return _bundle(
        user_text, config.suggestion_decoding(), Purpose.SUGGEST_THEMED_WIDGETS
    )


def compose_value_suggestions(
    widget: Widget,
    document_text: str,
    count: int,
    config: PromptConfig = DEFAULT_PROMPT_CONFIG,
) -> PromptBundle:
    """Ask for fresh values for one widget, excluding everything it has."""
    if count < 1:
        raise InvalidCount(f"suggestion count must be >= 1, got {count}")
    if not widget.title.strip():
        raise ValueError("value suggestions need a titled widget")
    _check_budget(document_text, config)
    exclusions: list[str] = []
    for value in [*widget.suggested_values, *widget.saved_values, widget.value]:
        if value and value not in exclusions:
            exclusions.append(value)
    user_text = (
        f'Suggest exactly {count} new candidate values for the writing facet '
        f'"{widget.title}".\n'
        + VALUE_JSON_CONTRACT.format(count=count)
    )
    if exclusions:
        user_text += "\nDo not repeat any of these existing values:\n" + "\n".join(
            f"- {value}" for value in exclusions
        )
    if document_text:
        user_text += f"\n\n{DOCUMENT_DELIMITER}\n{document_text}"
    return _bundle(user_text, config.suggestion_decoding(), Purpose.SUGGEST_VALUES)
