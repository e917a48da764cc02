import { byteSpanToCharRange } from "./bytes.js";
import type { ByteSpan } from "./types.js";

/**
 * Render `text` with the given server byte spans wrapped in <span class=cls>.
 * The spans come from the API already merged and ordered; nothing is
 * re-diffed here.
 */
export function renderHighlights(text: string, spans: ByteSpan[], cls: string): DocumentFragment {
  const frag = document.createDocumentFragment();
  let pos = 0;
  for (const span of spans) {
    const [start, end] = byteSpanToCharRange(text, span);
    if (start > pos) frag.append(text.slice(pos, start));
    const mark = document.createElement("span");
    mark.className = cls;
    mark.textContent = text.slice(start, end);
    frag.append(mark);
    pos = end;
  }
  if (pos < text.length) frag.append(text.slice(pos));
  return frag;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}
