import type { DomainInfo, SearchResultItem } from "../src/types";

export const DOMAINS: DomainInfo[] = [
  { name: "cricket", rel_min: 2, rel_max: 9 },
  { name: "hockey", rel_min: 3, rel_max: 7 },
  { name: "football", rel_min: 1, rel_max: 5 },
];

export function resultItem(overrides: Partial<SearchResultItem> = {}): SearchResultItem {
  return {
    id: "aaaaaaaaaaaaaaaaaaaaaaaa",
    image_url: "http://site.test/img.png",
    page_url: "http://site.test/page.html",
    relevance: 4.5,
    similarity: 100.0,
    rank: 1,
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Let queued microtasks and zero-delay timers run. */
export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

export function check(radio: HTMLInputElement): void {
  radio.checked = true;
  radio.dispatchEvent(new Event("change", { bubbles: true }));
}

export function setValue(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

export function submitForm(form: HTMLFormElement): void {
  form.dispatchEvent(new Event("submit", { cancelable: true }));
}

export function attachFile(input: HTMLInputElement, file: File): void {
  Object.defineProperty(input, "files", { value: [file], configurable: true });
}

export function query<T extends Element>(root: ParentNode, selector: string): T {
  const el = root.querySelector(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el as T;
}

export function queryAll<T extends Element>(root: ParentNode, selector: string): T[] {
  return Array.from(root.querySelectorAll(selector)) as T[];
}
