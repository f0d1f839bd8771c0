/** Thin client for the search service; the UI talks to nothing else. */

import type { DomainInfo, SearchRequest, SearchResponse } from "./types";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly field?: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  async domains(): Promise<DomainInfo[]> {
    const res = await this.fetchFn(`${this.baseUrl}/api/domains`);
    if (!res.ok) throw await responseError(res);
    return (await res.json()) as DomainInfo[];
  }

  async search(request: SearchRequest): Promise<SearchResponse> {
    const res = await this.fetchFn(`${this.baseUrl}/api/search`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!res.ok) throw await responseError(res);
    return (await res.json()) as SearchResponse;
  }

  /** URL of the cached thumbnail for a result entry; may 404 for signature-only entries. */
  thumbUrl(id: string): string {
    return `${this.baseUrl}/api/thumb/${encodeURIComponent(id)}`;
  }
}

/** The service reports validation problems as {"error": {"field", "message"}}. */
async function responseError(res: Response): Promise<ApiError> {
  try {
    const body = (await res.json()) as { error?: { field?: string; message?: string } };
    if (body.error?.message) {
      return new ApiError(body.error.message, body.error.field, res.status);
    }
  } catch {
    // non-JSON body; fall through to the generic message
  }
  return new ApiError(`request failed with status ${res.status}`, undefined, res.status);
}
