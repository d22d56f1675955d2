/** The conversational baseline view: chat list, transcript, edit control. */

import { ApiClient } from "./api.js";
import type { ChatSession, StreamEvent } from "./types.js";
import { el, toast } from "./util.js";

export class ChatPane {
  chats: ChatSession[] = [];
  activeChatId = "";
  pending = false;
  /** Test hook: resolves when the in-flight user action has settled. */
  lastAction: Promise<unknown> = Promise.resolve();

  private readonly sidebar: HTMLElement;
  private readonly transcript: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly sendBtn: HTMLButtonElement;

  constructor(
    private readonly api: ApiClient,
    readonly root: HTMLElement,
  ) {
    this.sidebar = el("aside", { attrs: { id: "chat-sidebar" } });
    this.transcript = el("div", { attrs: { id: "chat-transcript" } });
    this.input = el("input", {
      attrs: { id: "chat-input", placeholder: "Send a message…" },
    });
    this.sendBtn = el("button", { text: "Send", attrs: { id: "chat-send" } });
    const form = el("form", { attrs: { id: "chat-form" } }, [
      this.input,
      this.sendBtn,
    ]);
    const main = el("section", { attrs: { id: "chat-main" } }, [
      this.transcript,
      form,
    ]);
    root.append(this.sidebar, main);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const content = this.input.value.trim();
      if (!content || !this.activeChatId) return;
      this.input.value = "";
      this.run(() => this.consume(this.api.sendMessage(this.activeChatId, content)));
    });
  }

  private run<T>(action: () => Promise<T>): Promise<T | undefined> {
    const settled = action().catch((error: unknown) => {
      toast(error instanceof Error ? error.message : String(error));
      return undefined;
    });
    this.lastAction = settled;
    return settled;
  }

  get activeChat(): ChatSession | undefined {
    return this.chats.find((c) => c.id === this.activeChatId);
  }

  async refresh(): Promise<void> {
    this.chats = (await this.api.listChats()).chats;
    if (!this.chats.some((c) => c.id === this.activeChatId)) {
      this.activeChatId = this.chats[0]?.id ?? "";
    }
    this.render();
  }

  render(): void {
    this.renderSidebar();
    this.renderTranscript();
    this.sendBtn.disabled = this.pending || !this.activeChatId;
  }

  private renderSidebar(): void {
    this.sidebar.replaceChildren();
    const newChat = el("button", { text: "New chat", attrs: { id: "new-chat" } });
    newChat.addEventListener("click", () =>
      this.run(async () => {
        const created = await this.api.createChat();
        this.activeChatId = created.id;
        await this.refresh();
      }),
    );
    const duplicate = el("button", {
      text: "Duplicate",
      attrs: { id: "duplicate-chat" },
    });
    duplicate.addEventListener("click", () =>
      this.run(async () => {
        if (!this.activeChatId) return;
        const copy = await this.api.duplicateChat(this.activeChatId);
        this.activeChatId = copy.id;
        await this.refresh();
      }),
    );
    this.sidebar.append(newChat, duplicate);

    for (const chat of this.chats) {
      const row = el("div", {
        className:
          chat.id === this.activeChatId ? "chat-row selected" : "chat-row",
      });
      const label = el("span", { text: chat.title });
      label.addEventListener("click", () => {
        this.activeChatId = chat.id;
        this.render();
      });
      const remove = el("button", { className: "delete-chat", text: "✕" });
      remove.addEventListener("click", () =>
        this.run(async () => {
          await this.api.deleteChat(chat.id);
          await this.refresh();
        }),
      );
      row.append(label, remove);
      this.sidebar.append(row);
    }
  }

  private renderTranscript(): void {
    this.transcript.replaceChildren();
    const chat = this.activeChat;
    if (!chat) return;
    chat.messages.forEach((message, index) => {
      const bubble = el("div", { className: `chat-msg ${message.role}` });
      bubble.append(el("p", { className: "msg-content", text: message.content }));
      if (message.error) {
        bubble.append(el("span", { className: "msg-error", text: message.error }));
      }
      const copy = el("button", { className: "copy-msg", text: "Copy" });
      copy.addEventListener("click", () => {
        void navigator.clipboard?.writeText(message.content);
      });
      bubble.append(copy);
      if (message.role === "user") {
        const edit = el("button", { className: "edit-msg", text: "Edit" });
        edit.addEventListener("click", () => this.showEditor(bubble, index, message.content));
        bubble.append(edit);
      }
      this.transcript.append(bubble);
    });
  }

  private showEditor(bubble: HTMLElement, index: number, current: string): void {
    const input = el("input", { className: "edit-input" }) as HTMLInputElement;
    input.value = current;
    const form = el("form", { className: "edit-form" }, [
      input,
      el("button", { text: "Save" }),
    ]);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const content = input.value.trim();
      if (!content) return;
      this.run(() => this.consume(this.api.editMessage(this.activeChatId, index, content)));
    });
    bubble.append(form);
    input.focus();
  }

  /** Drain a reply stream, painting the assistant bubble as chunks arrive. */
  private async consume(events: AsyncGenerator<StreamEvent>): Promise<void> {
    this.pending = true;
    this.render();
    const live = el("div", { className: "chat-msg assistant streaming" });
    const text = el("p", { className: "msg-content", text: "" });
    live.append(text);
    this.transcript.append(live);
    try {
      for await (const event of events) {
        if (event.chunk) text.textContent += event.chunk;
        if (event.error) toast(event.detail ?? event.error);
      }
    } catch (error) {
      toast(error instanceof Error ? error.message : String(error));
    }
    this.pending = false;
    await this.refresh();
  }
}
