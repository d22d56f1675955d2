/** The canvas workbench: panel, infinite canvas, and streaming editor. */

import { ApiClient } from "./api.js";
import { withOptimistic } from "./optimistic.js";
import type { Canvas, StreamEvent, Widget } from "./types.js";
import { countWords, el, toast } from "./util.js";
import {
  ViewState,
  canvasToScreen,
  initialView,
  panBy,
  screenToCanvas,
  zoomAt,
} from "./view.js";

interface DragState {
  widgetId: string;
  from: "panel" | "canvas";
  startX: number;
  startY: number;
  origin: { x: number; y: number } | null;
}

interface PanState {
  lastX: number;
  lastY: number;
}

export class Workbench {
  view: ViewState = initialView();
  canvases: Canvas[] = [];
  activeCanvasId = "";
  /** Test hook: resolves when the in-flight user action has settled. */
  lastAction: Promise<unknown> = Promise.resolve();
  onStreamProgress: ((text: string) => void) | null = null;

  private drag: DragState | null = null;
  private pan: PanState | null = null;
  private preStreamText = "";

  private readonly tabs: HTMLElement;
  private readonly panelList: HTMLElement;
  private readonly surface: HTMLElement;
  private readonly editor: HTMLTextAreaElement;
  private readonly wordCount: HTMLElement;
  private readonly historyList: HTMLElement;
  private readonly errorBanner: HTMLElement;
  private readonly promptInput: HTMLInputElement;
  private readonly themedInput: HTMLInputElement;
  private readonly generateBtn: HTMLButtonElement;
  private readonly rephraseBtn: HTMLButtonElement;
  private readonly cancelBtn: HTMLButtonElement;

  constructor(
    private readonly api: ApiClient,
    readonly root: HTMLElement,
  ) {
    this.tabs = el("div", { attrs: { id: "canvas-tabs" } });
    const newCanvas = el("button", { text: "+", attrs: { id: "new-canvas" } });
    const copyCanvas = el("button", { text: "Copy", attrs: { id: "copy-canvas" } });
    const deleteCanvas = el("button", {
      text: "Delete",
      attrs: { id: "delete-canvas" },
    });
    const menu = el("header", { attrs: { id: "menu-bar" } }, [
      this.tabs,
      newCanvas,
      copyCanvas,
      deleteCanvas,
    ]);

    const suggestBtn = el("button", {
      text: "Get widget suggestions",
      attrs: { id: "suggest-widgets" },
    });
    this.themedInput = el("input", {
      attrs: { id: "themed-input", placeholder: "Create widgets about…" },
    });
    const themedForm = el("form", { attrs: { id: "themed-form" } }, [
      this.themedInput,
      el("button", { text: "Create widgets" }),
    ]);
    this.panelList = el("div", { attrs: { id: "panel-list" } });
    const panel = el("aside", { attrs: { id: "widget-panel" } }, [
      suggestBtn,
      themedForm,
      this.panelList,
    ]);

    this.surface = el("div", { attrs: { id: "canvas-surface" } });
    const canvasArea = el("section", { attrs: { id: "canvas-area" } }, [
      this.surface,
    ]);

    this.editor = el("textarea", { attrs: { id: "editor" } });
    this.wordCount = el("div", { text: "0 words", attrs: { id: "word-count" } });
    this.promptInput = el("input", {
      attrs: { id: "prompt-input", placeholder: "Prompt for generating text…" },
    });
    this.generateBtn = el("button", { text: "Generate", attrs: { id: "generate-btn" } });
    const promptForm = el("form", { attrs: { id: "prompt-form" } }, [
      this.promptInput,
      this.generateBtn,
    ]);
    this.rephraseBtn = el("button", {
      text: "Rephrase the text based on your widgets",
      attrs: { id: "rephrase-btn" },
    });
    this.cancelBtn = el("button", {
      text: "Cancel",
      attrs: { id: "cancel-btn", hidden: "" },
    });
    this.errorBanner = el("div", { attrs: { id: "error-banner", hidden: "" } });
    this.historyList = el("ul", { attrs: { id: "history-list" } });
    const editorPane = el("section", { attrs: { id: "editor-pane" } }, [
      this.wordCount,
      this.errorBanner,
      this.editor,
      promptForm,
      this.rephraseBtn,
      this.cancelBtn,
      el("h3", { text: "History" }),
      this.historyList,
    ]);

    root.append(
      menu,
      el("main", { attrs: { id: "workbench" } }, [panel, canvasArea, editorPane]),
    );

    newCanvas.addEventListener("click", () => this.run(() => this.createCanvas()));
    copyCanvas.addEventListener("click", () =>
      this.run(async () => {
        await this.api.copyCanvas(this.activeCanvasId);
        await this.refresh();
      }),
    );
    deleteCanvas.addEventListener("click", () =>
      this.run(async () => {
        await this.api.deleteCanvas(this.activeCanvasId);
        this.activeCanvasId = "";
        await this.refresh();
      }),
    );
    suggestBtn.addEventListener("click", () =>
      this.run(async () => {
        await this.api.suggestWidgets(this.activeCanvasId);
        await this.refresh();
      }),
    );
    themedForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const theme = this.themedInput.value.trim();
      if (!theme) return;
      this.run(async () => {
        await this.api.themedWidgets(this.activeCanvasId, theme);
        this.themedInput.value = "";
        await this.refresh();
      });
    });
    promptForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const prompt = this.promptInput.value.trim();
      if (!prompt) return;
      this.run(() => this.streamInto(this.api.generate(this.activeCanvasId, prompt)));
    });
    this.rephraseBtn.addEventListener("click", () =>
      this.run(() => this.streamInto(this.api.rephrase(this.activeCanvasId))),
    );
    this.cancelBtn.addEventListener("click", () => {
      const jobId = this.view.pendingStream;
      if (jobId) this.run(() => this.api.cancelJob(jobId));
    });
    this.editor.addEventListener("input", () => {
      this.wordCount.textContent = `${countWords(this.editor.value)} words`;
    });
    this.editor.addEventListener("change", () => {
      if (this.view.pendingStream) return;
      this.run(async () => {
        await this.api.putDocument(this.activeCanvasId, this.editor.value);
        await this.refresh();
      });
    });

    this.surface.addEventListener("dblclick", (event) => {
      if ((event.target as Element).closest(".widget-card")) return;
      const point = screenToCanvas(this.view, {
        x: event.clientX,
        y: event.clientY,
      });
      this.run(async () => {
        await this.api.createWidget(this.activeCanvasId, point.x, point.y);
        await this.refresh();
      });
    });
    this.surface.addEventListener("mousedown", (event) => {
      if ((event.target as Element).closest(".widget-card")) return;
      this.pan = { lastX: event.clientX, lastY: event.clientY };
    });
    this.surface.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
      this.view = zoomAt(this.view, factor, { x: event.clientX, y: event.clientY });
      this.renderCanvas();
    });
    document.addEventListener("mousemove", (event) => {
      if (this.pan) {
        this.view = panBy(
          this.view,
          event.clientX - this.pan.lastX,
          event.clientY - this.pan.lastY,
        );
        this.pan = { lastX: event.clientX, lastY: event.clientY };
        this.renderCanvas();
      }
    });
    document.addEventListener("mouseup", (event) => this.onMouseUp(event));
  }

  get activeCanvas(): Canvas | undefined {
    return this.canvases.find((c) => c.id === this.activeCanvasId);
  }

  /** Chain an action so tests can `await workbench.lastAction`. */
  private run<T>(action: () => Promise<T>): Promise<T | undefined> {
    const settled = action().catch((error: unknown) => {
      toast(error instanceof Error ? error.message : String(error));
      return undefined;
    });
    this.lastAction = settled;
    return settled;
  }

  async load(): Promise<void> {
    await this.refresh();
  }

  async refresh(): Promise<void> {
    const listing = await this.api.listCanvases();
    this.canvases = listing.canvases;
    if (!this.canvases.some((c) => c.id === this.activeCanvasId)) {
      this.activeCanvasId = listing.activeCanvasId;
    }
    this.render();
  }

  private async createCanvas(): Promise<void> {
    const created = await this.api.createCanvas();
    this.activeCanvasId = created.id;
    await this.refresh();
  }

  render(): void {
    this.renderTabs();
    this.renderPanel();
    this.renderCanvas();
    if (!this.view.pendingStream) {
      const canvas = this.activeCanvas;
      this.editor.value = canvas?.document.text ?? "";
      this.wordCount.textContent = `${canvas?.document.wordCount ?? 0} words`;
    }
    this.renderHistory();
    const busy = this.view.pendingStream !== null;
    this.generateBtn.disabled = busy;
    this.rephraseBtn.disabled = busy;
    this.cancelBtn.hidden = !busy;
  }

  private renderTabs(): void {
    this.tabs.replaceChildren();
    for (const canvas of this.canvases) {
      const tab = el("button", {
        className:
          canvas.id === this.activeCanvasId ? "canvas-tab selected" : "canvas-tab",
        text: canvas.name,
      });
      tab.addEventListener("click", () => {
        this.activeCanvasId = canvas.id;
        this.render();
      });
      this.tabs.append(tab);
    }
  }

  private renderPanel(): void {
    this.panelList.replaceChildren();
    const canvas = this.activeCanvas;
    if (!canvas) return;
    for (const widget of canvas.widgets) {
      if (widget.placement === null) {
        this.panelList.append(this.widgetCard(widget, "panel"));
      }
    }
  }

  private renderCanvas(): void {
    this.surface.replaceChildren();
    const canvas = this.activeCanvas;
    if (!canvas) return;
    for (const widget of canvas.widgets) {
      if (widget.placement === null) continue;
      const card = this.widgetCard(widget, "canvas");
      const screen = canvasToScreen(this.view, widget.placement);
      card.style.left = `${screen.x}px`;
      card.style.top = `${screen.y}px`;
      card.style.width = `${widget.placement.width * this.view.zoom}px`;
      card.style.minHeight = `${widget.placement.height * this.view.zoom}px`;
      this.surface.append(card);
    }
  }

  private widgetCard(widget: Widget, where: "panel" | "canvas"): HTMLElement {
    const classes = ["widget-card"];
    if (where === "canvas") classes.push("on-canvas", "light-blue");
    if (widget.isNew) classes.push("glow");
    const card = el("div", {
      className: classes.join(" "),
      attrs: { "data-widget-id": widget.id },
    });

    const title = el("input", {
      className: "widget-title",
      attrs: { value: widget.title },
    }) as HTMLInputElement;
    title.value = widget.title;
    title.addEventListener("change", () =>
      this.run(async () => {
        await this.api.patchWidget(widget.id, { title: title.value });
        await this.refresh();
      }),
    );
    const value = el("input", {
      className: "widget-value",
      attrs: { value: widget.value, placeholder: "value" },
    }) as HTMLInputElement;
    value.value = widget.value;
    value.addEventListener("change", () =>
      this.run(async () => {
        await this.api.patchWidget(widget.id, { value: value.value });
        await this.refresh();
      }),
    );

    const suggestions = el("div", { className: "widget-suggestions" });
    for (const option of widget.suggestedValues) {
      const chip = el("button", { className: "value-chip", text: option });
      chip.addEventListener("click", () =>
        this.run(async () => {
          await this.api.patchWidget(widget.id, { value: option });
          await this.refresh();
        }),
      );
      suggestions.append(chip);
    }

    const more = el("button", { className: "more-values", text: "Get suggestions" });
    more.addEventListener("click", () =>
      this.run(async () => {
        await this.api.suggestValues(widget.id);
        await this.refresh();
      }),
    );
    const save = el("button", { className: "save-value", text: "Save" });
    save.addEventListener("click", () =>
      this.run(async () => {
        await this.api.saveValue(widget.id);
        await this.refresh();
      }),
    );
    const remove = el("button", { className: "delete-widget", text: "✕" });
    remove.addEventListener("click", () =>
      this.run(async () => {
        await this.api.deleteWidget(widget.id);
        await this.refresh();
      }),
    );

    card.append(title, value, suggestions, more, save, remove);

    card.addEventListener("mousedown", (event) => {
      // Inputs and buttons keep their behavior; drags start on the card body.
      if ((event.target as Element).closest("input, button")) return;
      if (widget.isNew) {
        // Clear the glow on first interaction; the PATCH below confirms it.
        card.classList.remove("glow");
      }
      this.drag = {
        widgetId: widget.id,
        from: where,
        startX: event.clientX,
        startY: event.clientY,
        origin: widget.placement
          ? { x: widget.placement.x, y: widget.placement.y }
          : null,
      };
    });
    return card;
  }

  private onMouseUp(event: MouseEvent): void {
    this.pan = null;
    const drag = this.drag;
    if (!drag) return;
    this.drag = null;
    const target = event.target as Element;
    const overCanvas = Boolean(target.closest("#canvas-area"));
    const overPanel = Boolean(target.closest("#widget-panel"));
    const point = screenToCanvas(this.view, { x: event.clientX, y: event.clientY });

    if (drag.from === "panel" && overCanvas) {
      this.run(() => this.activateWidget(drag.widgetId, point.x, point.y));
    } else if (drag.from === "canvas" && overPanel) {
      this.run(async () => {
        await this.api.patchWidget(drag.widgetId, { placement: "panel" });
        await this.refresh();
      });
    } else if (drag.from === "canvas" && overCanvas && drag.origin) {
      const dx = (event.clientX - drag.startX) / this.view.zoom;
      const dy = (event.clientY - drag.startY) / this.view.zoom;
      if (dx !== 0 || dy !== 0) {
        this.run(() =>
          this.moveWidget(drag.widgetId, drag.origin!, {
            x: drag.origin!.x + dx,
            y: drag.origin!.y + dy,
          }),
        );
      }
    }
  }

  private async activateWidget(widgetId: string, x: number, y: number): Promise<void> {
    const canvas = this.activeCanvas;
    const widget = canvas?.widgets.find((w) => w.id === widgetId);
    if (!canvas || !widget) return;
    await withOptimistic({
      apply: () => {
        widget.placement = { x, y, width: 240, height: 160 };
        widget.isNew = false;
        this.render();
      },
      call: () =>
        this.api.patchWidget(widgetId, { placement: "canvas", x, y }),
      rollback: () => {
        widget.placement = null;
        this.render();
      },
    });
    await this.refresh();
  }

  private async moveWidget(
    widgetId: string,
    origin: { x: number; y: number },
    to: { x: number; y: number },
  ): Promise<void> {
    const widget = this.activeCanvas?.widgets.find((w) => w.id === widgetId);
    if (!widget || !widget.placement) return;
    const placement = widget.placement;
    await withOptimistic({
      apply: () => {
        placement.x = to.x;
        placement.y = to.y;
        this.renderCanvas();
      },
      call: () => this.api.patchWidget(widgetId, { x: to.x, y: to.y }),
      rollback: () => {
        placement.x = origin.x;
        placement.y = origin.y;
        this.renderCanvas();
      },
    });
    await this.refresh();
  }

  private async streamInto(events: AsyncGenerator<StreamEvent>): Promise<void> {
    if (this.view.pendingStream) return;
    this.errorBanner.hidden = true;
    this.preStreamText = this.editor.value;
    this.editor.value = "";
    let streamedText = "";
    let failed: string | null = null;
    let cancelled = false;
    this.view = { ...this.view, pendingStream: "starting" };
    this.render();
    try {
      for await (const event of events) {
        if (event.jobId && this.view.pendingStream === "starting") {
          this.view = { ...this.view, pendingStream: event.jobId };
          this.render();
        }
        if (event.chunk) {
          streamedText += event.chunk;
          this.editor.value = streamedText;
          this.wordCount.textContent = `${countWords(streamedText)} words`;
          this.onStreamProgress?.(streamedText);
        }
        if (event.error) failed = event.detail ?? event.error;
        if (event.cancelled) cancelled = true;
        if (event.done && typeof event.finalText === "string") {
          streamedText = event.finalText;
          this.editor.value = streamedText;
        }
      }
    } catch (error) {
      failed = error instanceof Error ? error.message : String(error);
    }
    this.view = { ...this.view, pendingStream: null };
    if (failed !== null || cancelled) {
      this.editor.value = this.preStreamText;
      if (failed !== null) {
        this.errorBanner.textContent = failed;
        this.errorBanner.hidden = false;
      }
      this.render();
      return;
    }
    await this.refresh();
  }

  private renderHistory(): void {
    this.historyList.replaceChildren();
    const canvas = this.activeCanvas;
    if (!canvas) return;
    for (const entry of [...canvas.document.history].reverse()) {
      const revert = el("button", { className: "revert-btn", text: "Revert" });
      revert.addEventListener("click", () =>
        this.run(async () => {
          await this.api.revert(canvas.id, entry.id);
          await this.refresh();
        }),
      );
      this.historyList.append(
        el("li", { className: "history-entry" }, [
          el("span", {
            className: "history-cause",
            text: entry.cause,
            title: entry.text.slice(0, 200),
          }),
          revert,
        ]),
      );
    }
  }
}
