/**
 * Wires the pieces together: fetch the domain list once, render the form,
 * run searches against the API, and paint the gallery. At most one search
 * is in flight; the button stays disabled until it settles.
 */

import { ApiClient, ApiError } from "./api";
import { ErrorBanner } from "./banner";
import { SearchForm } from "./form";
import { renderGallery } from "./gallery";
import type { DomainInfo, SearchRequest } from "./types";

function errorMessage(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return `Search failed: ${err.message}`;
  return "Search failed.";
}

export async function initApp(root: HTMLElement, api: ApiClient = new ApiClient()): Promise<void> {
  root.textContent = "";

  const banner = new ErrorBanner();
  const heading = document.createElement("h1");
  heading.textContent = "Image search";
  const gallery = document.createElement("section");
  gallery.className = "gallery";
  gallery.setAttribute("aria-live", "polite");

  let domains: DomainInfo[] = [];
  let loadError: unknown = null;
  try {
    domains = await api.domains();
  } catch (err) {
    loadError = err;
  }

  let inFlight = false;
  const form = new SearchForm(domains, async (request: SearchRequest) => {
    if (inFlight) return;
    inFlight = true;
    form.setBusy(true);
    banner.hide();
    try {
      const response = await api.search(request);
      renderGallery(gallery, response.results, (id) => api.thumbUrl(id));
    } catch (err) {
      banner.show(errorMessage(err));
    } finally {
      inFlight = false;
      form.setBusy(false);
    }
  });

  root.append(heading, banner.element, form.element, gallery);
  if (loadError !== null) {
    banner.show(`Cannot load domains: ${errorMessage(loadError)}`);
  }
}
