"""Conversational baseline: linear chats with streaming replies.

Replies stream from the same completion gateway as the workbench; editing
a user message resets the chat to that point and regenerates. A failed
reply keeps the user's message, marked, so resending never duplicates it.
"""

from __future__ import annotations

from typing import Iterator

from draftcanvas.gateway import GatewayError
from draftcanvas.model import (
    ChatMessage,
    ChatRole,
    ChatSession,
    Condition,
    EmptyMessage,
    EventKind,
    GenerationInProgress,
    IndexOutOfRange,
    NotAUserMessage,
)
from draftcanvas.prompts import (
    Decoding,
    PromptBundle,
    PromptConfig,
    Purpose,
    Role,
    SYSTEM_MESSAGE,
)
from draftcanvas.runtime import Runtime

FAILURE_MARKER = "reply failed"
INTERRUPTED_MARKER = "reply interrupted"


class ChatService:
    def __init__(self, runtime: Runtime, config: PromptConfig | None = None):
        self.runtime = runtime
        self.config = config or PromptConfig()
        self._pending: set[str] = set()

    # -- session management -------------------------------------------------

    def list_chats(self) -> list[ChatSession]:
        with self.runtime.lock:
            return list(self.runtime.state.chats)

    def get_chat(self, chat_id: str) -> ChatSession:
        with self.runtime.lock:
            return self.runtime.state.require_chat(chat_id)

    def create_chat(self, title: str | None = None) -> ChatSession:
        with self.runtime.lock:
            chat = ChatSession(
                id=self.runtime.new_id(),
                title=title or f"Chat {len(self.runtime.state.chats) + 1}",
                created_at=self.runtime.clock.tick(),
            )
            self.runtime.state.chats.append(chat)
            self.runtime.autosave()
            return chat

    def duplicate_chat(self, chat_id: str) -> ChatSession:
        with self.runtime.lock:
            source = self.runtime.state.require_chat(chat_id)
            copy = ChatSession(
                id=self.runtime.new_id(),
                title=source.title + " (copy)",
                messages=[
                    ChatMessage(m.role, m.content, m.created_at, m.error)
                    for m in source.messages
                ],
                created_at=self.runtime.clock.tick(),
            )
            self.runtime.state.chats.append(copy)
            self.runtime.autosave()
            return copy

    def delete_chat(self, chat_id: str) -> None:
        with self.runtime.lock:
            chat = self.runtime.state.require_chat(chat_id)
            self.runtime.state.chats.remove(chat)
            self._pending.discard(chat_id)
            self.runtime.autosave()

    # -- messaging ------------------------------------------------------------

    def send_message(self, chat_id: str, content: str) -> Iterator[str]:
        """Append (or retry) a user message and stream the assistant reply."""
        if not content.strip():
            raise EmptyMessage("messages need nonempty content")
        with self.runtime.lock:
            chat = self.runtime.state.require_chat(chat_id)
            self._ensure_idle(chat_id)
            last = chat.messages[-1] if chat.messages else None
            if last is not None and last.role is ChatRole.USER:
                # The previous reply failed; replace instead of duplicating.
                last.content = content
                last.error = None
            else:
                chat.messages.append(
                    ChatMessage(
                        role=ChatRole.USER,
                        content=content,
                        created_at=self.runtime.clock.tick(),
                    )
                )
            self._pending.add(chat_id)
            self.runtime.autosave()
        return self._reply(chat_id, EventKind.CHAT_MESSAGE_SENT)

    def edit_message(
        self, chat_id: str, message_index: int, new_content: str
    ) -> Iterator[str]:
        """Reset the chat to a user message, replace it, and regenerate."""
        if not new_content.strip():
            raise EmptyMessage("messages need nonempty content")
        with self.runtime.lock:
            chat = self.runtime.state.require_chat(chat_id)
            self._ensure_idle(chat_id)
            if not 0 <= message_index < len(chat.messages):
                raise IndexOutOfRange(
                    f"index {message_index} outside 0..{len(chat.messages) - 1}"
                )
            target = chat.messages[message_index]
            if target.role is not ChatRole.USER:
                raise NotAUserMessage(f"message {message_index} is an assistant reply")
            del chat.messages[message_index + 1 :]
            target.content = new_content
            target.error = None
            self._pending.add(chat_id)
            self.runtime.autosave()
        return self._reply(chat_id, EventKind.CHAT_MESSAGE_EDITED)

    def run_reply(self, stream: Iterator[str]) -> str:
        """Drain a reply stream and return the full assistant text."""
        return "".join(stream)

    # -- internals --------------------------------------------------------------

    def _ensure_idle(self, chat_id: str) -> None:
        if chat_id in self._pending:
            raise GenerationInProgress(f"chat {chat_id!r} has a pending reply")

    def _bundle_for(self, chat: ChatSession) -> PromptBundle:
        messages: list[tuple[Role, str]] = [(Role.SYSTEM, SYSTEM_MESSAGE)]
        for message in chat.messages:
            role = Role.USER if message.role is ChatRole.USER else Role.ASSISTANT
            messages.append((role, message.content))
        return PromptBundle(
            messages=tuple(messages),
            decoding=Decoding(
                self.config.generation_temperature, self.config.generation_max_tokens
            ),
            purpose=Purpose.GENERATE,
        )

    def _reply(self, chat_id: str, event_kind: EventKind) -> Iterator[str]:
        with self.runtime.lock:
            chat = self.runtime.state.require_chat(chat_id)
            bundle = self._bundle_for(chat)
        stream = self.runtime.completer(bundle)
        try:
            try:
                yield from stream
            except GeneratorExit:
                stream.close()
                self._mark_failure(chat_id, INTERRUPTED_MARKER)
                raise
            except GatewayError as exc:
                self._mark_failure(chat_id, f"{FAILURE_MARKER}: {exc}")
                raise
        except BaseException:
            raise
        else:
            with self.runtime.lock:
                chat = self.runtime.state.find_chat(chat_id)
                self._pending.discard(chat_id)
                if chat is None:
                    return
                chat.messages.append(
                    ChatMessage(
                        role=ChatRole.ASSISTANT,
                        content=stream.final_text,
                        created_at=self.runtime.clock.tick(),
                    )
                )
                self.runtime.record(
                    Condition.STATIC_UI,
                    event_kind,
                    {"chatId": chat_id, "messageCount": len(chat.messages)},
                )
                self.runtime.autosave()

    def _mark_failure(self, chat_id: str, marker: str) -> None:
        with self.runtime.lock:
            self._pending.discard(chat_id)
            chat = self.runtime.state.find_chat(chat_id)
            if chat is None or not chat.messages:
                return
            last = chat.messages[-1]
            if last.role is ChatRole.USER:
                last.error = marker
            self.runtime.autosave()
