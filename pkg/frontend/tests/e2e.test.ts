/**
 * End-to-end: the real backend (mock provider, fixed seed) serves HTTP/SSE;
 * the UI runs in jsdom and talks to it over fetch like a browser would.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountApp, type App } from "../src/app.js";
import { countWords } from "../src/util.js";

const PORT = 8200 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let dataDir: string;
let app: App;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/canvases`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("backend did not come up in time");
}

function mouse(type: string, options: MouseEventInit): MouseEvent {
  return new MouseEvent(type, { bubbles: true, cancelable: true, ...options });
}

function activeCanvasId(): string {
  return app.workbench.activeCanvasId;
}

async function serverCanvas() {
  const listing = (await (await fetch(`${BASE}/canvases`)).json()) as {
    canvases: { id: string; document: { text: string; wordCount: number } }[];
  };
  return listing.canvases.find((c) => c.id === activeCanvasId())!;
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "draftcanvas-e2e-"));
  server = spawn(
    "python3",
    ["-m", "draftcanvas.cli", "serve", "--mock", "--seed", "7",
     "--port", String(PORT), "--data-dir", dataDir],
    { stdio: "ignore" },
  );
  await waitForServer();
  document.body.innerHTML = '<div id="app"></div>';
  app = await mountApp(document.getElementById("app")!, BASE);
});

afterAll(() => {
  server?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

describe("streaming editor", () => {
  it("shows chunks incrementally and the final text verbatim", async () => {
    const editor = document.getElementById("editor") as HTMLTextAreaElement;
    const promptInput = document.getElementById(
      "prompt-input",
    ) as HTMLInputElement;
    const snapshots: string[] = [];
    app.workbench.onStreamProgress = (text) => snapshots.push(text);

    promptInput.value = "Write a short story about survival in the wilderness";
    document
      .getElementById("prompt-form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await app.workbench.lastAction;

    expect(snapshots.length).toBeGreaterThan(1);
    for (let i = 1; i < snapshots.length; i++) {
      expect(snapshots[i]!.startsWith(snapshots[i - 1]!)).toBe(true);
    }
    const remote = await serverCanvas();
    expect(editor.value).toBe(remote.document.text);
    expect(editor.value.length).toBeGreaterThan(0);
  });

  it("live word count matches the server's count", async () => {
    const editor = document.getElementById("editor") as HTMLTextAreaElement;
    const wordCount = document.getElementById("word-count")!;
    const remote = await serverCanvas();
    expect(wordCount.textContent).toBe(`${remote.document.wordCount} words`);
    expect(countWords(editor.value)).toBe(remote.document.wordCount);
  });

  it("records the generation in the history list", () => {
    const entries = document.querySelectorAll("#history-list .history-cause");
    expect(entries.length).toBe(1);
    expect(entries[0]!.textContent).toBe("Generation");
  });
});

describe("widget drag and drop", () => {
  it("panel suggestions arrive glowing, drag onto canvas activates", async () => {
    document.getElementById("suggest-widgets")!.dispatchEvent(mouse("click", {}));
    await app.workbench.lastAction;

    const panelCards = document.querySelectorAll("#panel-list .widget-card");
    expect(panelCards.length).toBe(4);
    const card = panelCards[0] as HTMLElement;
    expect(card.classList.contains("glow")).toBe(true);
    expect(card.classList.contains("light-blue")).toBe(false);
    const widgetId = card.dataset.widgetId!;

    card.dispatchEvent(mouse("mousedown", { clientX: 40, clientY: 120 }));
    document
      .getElementById("canvas-area")!
      .dispatchEvent(mouse("mouseup", { clientX: 500, clientY: 240 }));
    await app.workbench.lastAction;

    const onCanvas = document.querySelector(
      `#canvas-surface .widget-card[data-widget-id="${widgetId}"]`,
    ) as HTMLElement;
    expect(onCanvas).not.toBeNull();
    expect(onCanvas.classList.contains("light-blue")).toBe(true);
    expect(onCanvas.classList.contains("glow")).toBe(false);

    // The server agrees: placement set, freshness cleared.
    const remote = await serverCanvas();
    const widgets = (await (await fetch(`${BASE}/canvases`)).json()) as {
      canvases: { id: string; widgets: { id: string; placement: unknown; isNew: boolean }[] }[];
    };
    const stored = widgets.canvases
      .find((c) => c.id === remote.id)!
      .widgets.find((w) => w.id === widgetId)!;
    expect(stored.placement).not.toBeNull();
    expect(stored.isNew).toBe(false);
  });

  it("position is preserved across a reload", async () => {
    const before = document.querySelector(
      "#canvas-surface .widget-card",
    ) as HTMLElement;
    const id = before.dataset.widgetId;
    const left = before.style.left;
    await app.workbench.refresh();
    const after = document.querySelector(
      `#canvas-surface .widget-card[data-widget-id="${id}"]`,
    ) as HTMLElement;
    expect(after.style.left).toBe(left);
  });

  it("rephrase under the active widget embeds its value", async () => {
    const active = document.querySelector(
      "#canvas-surface .widget-card",
    ) as HTMLElement;
    const value = (
      active.querySelector(".widget-value") as HTMLInputElement
    ).value;
    document.getElementById("rephrase-btn")!.dispatchEvent(mouse("click", {}));
    await app.workbench.lastAction;
    const editor = document.getElementById("editor") as HTMLTextAreaElement;
    expect(editor.value).toContain(value);
  });
});

describe("baseline chat", () => {
  async function sendMessage(content: string): Promise<void> {
    const input = document.getElementById("chat-input") as HTMLInputElement;
    input.value = content;
    document
      .getElementById("chat-form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await app.chat.lastAction;
  }

  it("streams replies into the transcript", async () => {
    document.getElementById("new-chat")!.dispatchEvent(mouse("click", {}));
    await app.chat.lastAction;
    await sendMessage("message 0");
    await sendMessage("message 1");
    await sendMessage("message 2");
    const bubbles = document.querySelectorAll("#chat-transcript .chat-msg");
    expect(bubbles.length).toBe(6);
    expect(bubbles[5]!.classList.contains("assistant")).toBe(true);
    expect(bubbles[5]!.querySelector(".msg-content")!.textContent!.length)
      .toBeGreaterThan(0);
  });

  it("the edit control truncates the transcript to the reset point", async () => {
    const bubbles = document.querySelectorAll("#chat-transcript .chat-msg");
    const third = bubbles[2] as HTMLElement; // user message index 2
    third.querySelector(".edit-msg")!.dispatchEvent(mouse("click", {}));
    const editInput = third.querySelector(".edit-input") as HTMLInputElement;
    editInput.value = "rewritten message";
    third
      .querySelector(".edit-form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await app.chat.lastAction;

    const after = document.querySelectorAll("#chat-transcript .chat-msg");
    expect(after.length).toBe(4);
    expect(after[2]!.querySelector(".msg-content")!.textContent).toBe(
      "rewritten message",
    );
    expect(after[3]!.classList.contains("assistant")).toBe(true);

    const remote = (await (
      await fetch(`${BASE}/chats/${app.chat.activeChatId}`)
    ).json()) as { messages: { role: string }[] };
    expect(remote.messages.length).toBe(4);
  });
});
