/**
 * Result gallery: thumbnails in server rank order, each linking to the page
 * the image was found on. Entries whose bytes were never cached get a
 * neutral placeholder when /api/thumb 404s.
 */

import type { SearchResultItem } from "./types";

export const PLACEHOLDER_SRC =
  "data:image/svg+xml," +
  encodeURIComponent(
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 96 96">' +
      '<rect width="96" height="96" fill="#d4d4d4"/>' +
      '<text x="48" y="52" font-size="10" text-anchor="middle" fill="#666">no preview</text>' +
      "</svg>",
  );

function formatSimilarity(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return String(rounded);
}

export function renderGallery(
  container: HTMLElement,
  results: SearchResultItem[],
  thumbUrl: (id: string) => string,
): void {
  container.textContent = "";
  if (results.length === 0) {
    const empty = document.createElement("p");
    empty.className = "no-matches";
    empty.textContent = "No matches.";
    container.append(empty);
    return;
  }
  for (const item of results) {
    const figure = document.createElement("figure");
    figure.className = "result";
    figure.dataset.rank = String(item.rank);
    figure.dataset.id = item.id;

    const link = document.createElement("a");
    link.href = item.page_url;
    link.target = "_blank";
    link.rel = "noopener";

    const img = document.createElement("img");
    img.src = thumbUrl(item.id);
    img.alt = `match ranked ${item.rank}`;
    img.addEventListener(
      "error",
      () => {
        img.src = PLACEHOLDER_SRC;
        img.classList.add("placeholder");
      },
      { once: true },
    );
    link.append(img);

    const caption = document.createElement("figcaption");
    const similarity = document.createElement("span");
    similarity.className = "similarity";
    similarity.textContent = `${formatSimilarity(item.similarity)}% similar`;
    const pageLink = document.createElement("a");
    pageLink.className = "page-link";
    pageLink.href = item.page_url;
    pageLink.target = "_blank";
    pageLink.rel = "noopener";
    pageLink.textContent = item.page_url;
    caption.append(similarity, pageLink);

    figure.append(link, caption);
    container.append(figure);
  }
}
