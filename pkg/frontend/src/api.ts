/** Typed client for the workbench and baseline-chat HTTP/SSE APIs. */

import { streamSse } from "./sse.js";
import type { Canvas, ChatSession, DocumentState, StreamEvent, Widget } from "./types.js";

export interface WidgetPatch {
  title?: string;
  value?: string;
  x?: number;
  y?: number;
  width?: number;
  height?: number;
  placement?: "panel" | "canvas";
}

export class ApiError extends Error {}

async function request<T>(url: string, init: RequestInit = {}): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      (body as { detail?: string }).detail ?? `HTTP ${response.status}`;
    throw new ApiError(detail);
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return request<T>(this.url(path), {
      method: "POST",
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
  }

  // Canvases
  listCanvases(): Promise<{ canvases: Canvas[]; activeCanvasId: string }> {
    return request(this.url("/canvases"));
  }
  createCanvas(name?: string): Promise<Canvas> {
    return this.post("/canvases", name ? { name } : {});
  }
  copyCanvas(id: string): Promise<Canvas> {
    return this.post(`/canvases/${id}/copy`);
  }
  deleteCanvas(id: string): Promise<void> {
    return request(this.url(`/canvases/${id}`), { method: "DELETE" });
  }

  // Widgets
  createWidget(canvasId: string, x: number, y: number): Promise<Widget> {
    return this.post(`/canvases/${canvasId}/widgets`, { x, y });
  }
  patchWidget(id: string, patch: WidgetPatch): Promise<Widget> {
    return request(this.url(`/widgets/${id}`), {
      method: "PATCH",
      body: JSON.stringify(patch),
    });
  }
  deleteWidget(id: string): Promise<void> {
    return request(this.url(`/widgets/${id}`), { method: "DELETE" });
  }
  suggestWidgets(canvasId: string): Promise<{ widgets: Widget[] }> {
    return this.post(`/canvases/${canvasId}/widgets/suggest`);
  }
  themedWidgets(canvasId: string, theme: string): Promise<{ widgets: Widget[] }> {
    return this.post(`/canvases/${canvasId}/widgets/themed`, { theme });
  }
  suggestValues(widgetId: string): Promise<Widget> {
    return this.post(`/widgets/${widgetId}/values/suggest`);
  }
  saveValue(widgetId: string): Promise<Widget> {
    return this.post(`/widgets/${widgetId}/values/save`);
  }

  // Document, history, jobs
  putDocument(canvasId: string, text: string): Promise<DocumentState> {
    return request(this.url(`/canvases/${canvasId}/document`), {
      method: "PUT",
      body: JSON.stringify({ text }),
    });
  }
  getHistory(canvasId: string): Promise<{ history: DocumentState["history"] }> {
    return request(this.url(`/canvases/${canvasId}/history`));
  }
  revert(canvasId: string, entryId: string): Promise<DocumentState> {
    return this.post(`/canvases/${canvasId}/history/${entryId}/revert`);
  }
  cancelJob(jobId: string): Promise<{ state: string }> {
    return this.post(`/jobs/${jobId}/cancel`);
  }

  generate(canvasId: string, prompt: string): AsyncGenerator<StreamEvent> {
    return streamSse<StreamEvent>(this.url(`/canvases/${canvasId}/generate`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ prompt }),
    });
  }
  rephrase(canvasId: string): AsyncGenerator<StreamEvent> {
    return streamSse<StreamEvent>(this.url(`/canvases/${canvasId}/rephrase`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: "{}",
    });
  }

  // Chats
  listChats(): Promise<{ chats: ChatSession[] }> {
    return request(this.url("/chats"));
  }
  createChat(): Promise<ChatSession> {
    return this.post("/chats");
  }
  getChat(id: string): Promise<ChatSession> {
    return request(this.url(`/chats/${id}`));
  }
  duplicateChat(id: string): Promise<ChatSession> {
    return this.post(`/chats/${id}/duplicate`);
  }
  deleteChat(id: string): Promise<void> {
    return request(this.url(`/chats/${id}`), { method: "DELETE" });
  }
  sendMessage(chatId: string, content: string): AsyncGenerator<StreamEvent> {
    return streamSse<StreamEvent>(this.url(`/chats/${chatId}/messages`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ content }),
    });
  }
  editMessage(
    chatId: string,
    index: number,
    content: string,
  ): AsyncGenerator<StreamEvent> {
    return streamSse<StreamEvent>(
      this.url(`/chats/${chatId}/messages/${index}/edit`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ content }),
      },
    );
  }
}
