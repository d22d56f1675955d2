/** Server-sent-events over fetch, so streams work in browsers and tests. */

export async function* streamSse<T>(
  url: string,
  init: RequestInit,
): AsyncGenerator<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string; error?: string };
      detail = body.detail ?? body.error ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new Error(`${response.status}: ${detail}`);
  }
  const reader = response.body?.getReader();
  if (!reader) throw new Error("response has no body to stream");
  const decoder = new TextDecoder();
  let buffer = "";
  while (true) {
    const { done, value } = await reader.read();
    if (done) break;
    buffer += decoder.decode(value, { stream: true });
    let boundary = buffer.indexOf("\n\n");
    while (boundary !== -1) {
      const block = buffer.slice(0, boundary).trim();
      buffer = buffer.slice(boundary + 2);
      if (block.startsWith("data: ")) {
        yield JSON.parse(block.slice("data: ".length)) as T;
      }
      boundary = buffer.indexOf("\n\n");
    }
  }
}
