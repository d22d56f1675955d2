/** Small DOM and text helpers. */

/** Whitespace-delimited word count, matching the server's counting rule. */
export function countWords(text: string): number {
  const matches = text.match(/\S+/g);
  return matches ? matches.length : 0;
}

type ElProps = {
  className?: string;
  text?: string;
  title?: string;
  attrs?: Record<string, string>;
};

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  props: ElProps = {},
  children: (HTMLElement | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (props.className) node.className = props.className;
  if (props.text !== undefined) node.textContent = props.text;
  if (props.title !== undefined) node.title = props.title;
  for (const [key, value] of Object.entries(props.attrs ?? {})) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function toast(message: string): void {
  const host = document.getElementById("toasts");
  if (!host) return;
  const note = el("div", { className: "toast", text: message });
  host.append(note);
  setTimeout(() => note.remove(), 4000);
}
