import { beforeEach, describe, expect, it } from "vitest";

import { PLACEHOLDER_SRC, renderGallery } from "../src/gallery";
import { queryAll, resultItem } from "./helpers";

const thumbUrl = (id: string) => `/api/thumb/${id}`;

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<section class="gallery"></section>';
  container = document.querySelector(".gallery") as HTMLElement;
});

describe("renderGallery", () => {
  it("renders results in the order the server ranked them", () => {
    const results = [
      resultItem({ id: "b".repeat(24), similarity: 100, rank: 1 }),
      resultItem({ id: "a".repeat(24), similarity: 91.5, rank: 2 }),
      resultItem({ id: "c".repeat(24), similarity: 60, rank: 3 }),
    ];
    renderGallery(container, results, thumbUrl);

    const figures = queryAll<HTMLElement>(container, ".result");
    expect(figures.map((el) => el.dataset.id)).toEqual([
      "b".repeat(24),
      "a".repeat(24),
      "c".repeat(24),
    ]);
    expect(figures.map((el) => el.dataset.rank)).toEqual(["1", "2", "3"]);
  });

  it("loads each thumbnail from the thumb endpoint", () => {
    renderGallery(container, [resultItem({ id: "f".repeat(24) })], thumbUrl);
    const img = container.querySelector("img") as HTMLImageElement;
    expect(img.getAttribute("src")).toBe(`/api/thumb/${"f".repeat(24)}`);
  });

  it("links every result to the page the image was found on", () => {
    renderGallery(
      container,
      [resultItem({ page_url: "http://site.test/article.html", similarity: 97.456 })],
      thumbUrl,
    );
    const links = queryAll<HTMLAnchorElement>(container, "a");
    expect(links.length).toBeGreaterThan(0);
    for (const link of links) {
      expect(link.getAttribute("href")).toBe("http://site.test/article.html");
    }
    expect(container.querySelector(".similarity")?.textContent).toBe("97.46% similar");
  });

  it("swaps in a neutral placeholder when the thumbnail 404s", () => {
    renderGallery(container, [resultItem()], thumbUrl);
    const img = container.querySelector("img") as HTMLImageElement;
    img.dispatchEvent(new Event("error"));

    expect(img.getAttribute("src")).toBe(PLACEHOLDER_SRC);
    expect(img.classList.contains("placeholder")).toBe(true);
  });

  it("shows a no-matches placeholder for an empty result set", () => {
    renderGallery(container, [], thumbUrl);
    expect(container.querySelector(".no-matches")?.textContent).toBe("No matches.");
    expect(container.querySelectorAll(".result")).toHaveLength(0);
  });

  it("replaces the previous gallery on re-render", () => {
    renderGallery(container, [resultItem(), resultItem({ id: "d".repeat(24), rank: 2 })], thumbUrl);
    expect(container.querySelectorAll(".result")).toHaveLength(2);

    renderGallery(container, [resultItem()], thumbUrl);
    expect(container.querySelectorAll(".result")).toHaveLength(1);
  });
});
