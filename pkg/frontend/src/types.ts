/** Wire types for the search service HTTP API. */

export interface DomainInfo {
  name: string;
  rel_min: number;
  rel_max: number;
}

export type SearchMode = "exact" | "probable";

/**
 * Body of POST /api/search. Exactly one of image_url / image_b64 is set;
 * exact mode always carries tolerance 0.
 */
export interface SearchRequest {
  image_url?: string;
  image_b64?: string;
  mode: SearchMode;
  tolerance: number;
  domain: string;
  relevance_range?: [number, number];
}

export interface SearchResultItem {
  id: string;
  image_url: string;
  page_url: string;
  relevance: number;
  similarity: number;
  rank: number;
}

export interface SearchResponse {
  results: SearchResultItem[];
}
