"""Image-to-image query execution over the repository.

Two match modes:

* **exact**: the query and candidate signatures agree at every bin to
  within ``EXACT_EPSILON`` percentage points (Chebyshev gap).  The epsilon
  absorbs resampling noise, so size- and color-variants of an indexed
  image still match exactly.
* **probable**: at most ``tolerance`` percentage points of distribution
  mass may disagree: the intersection similarity ``sum(min(q, r))`` must
  reach ``100 - tolerance``.  Exact matches are always included, so the
  exact result set is a subset of every probable one.

Results are ranked by ascending (100 - similarity), ties broken by
descending page relevance, then image URL, page URL (deterministic).
"""

from dataclasses import dataclass, field
from typing import Callable, Mapping

import requests

from .imaging import (
    ImageDecodeError,
    Signature,
    chebyshev_gap,
    intersection_similarity,
    signature_of_bytes,
)
from .ontology import DomainProfile
from .repository import ImageEntry, Repository

__all__ = [
    "EXACT_EPSILON",
    "SearchError",
    "Query",
    "SearchResult",
    "match_exact",
    "match_probable",
    "execute_search",
]

#: Exact-match Chebyshev bound, in percentage points.  Cross-size
#: deviations of resampled renderings stay an order of magnitude below it.
EXACT_EPSILON = 0.01

MODES = ("exact", "probable")


class SearchError(ValueError):
    """Invalid query input: unknown domain, bad range, unusable image."""


@dataclass(frozen=True)
class Query:
    """An image-to-image search request.

    ``image_ref`` is either raw encoded image bytes or an http(s) URL the
    executor fetches.  ``rel_range`` of None means "the domain's full
    bounds".
    """

    image_ref: str | bytes
    domain: str
    mode: str = "probable"
    tolerance: int = 0
    rel_range: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise SearchError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.tolerance, int) or isinstance(self.tolerance, bool):
            raise SearchError("tolerance must be an integer")
        if not 0 <= self.tolerance <= 100:
            raise SearchError(f"tolerance {self.tolerance} outside [0, 100]")
        if self.mode == "exact" and self.tolerance != 0:
            raise SearchError("exact mode requires tolerance 0")
        if self.rel_range is not None:
            lo, hi = self.rel_range
            if lo > hi:
                raise SearchError(f"relevance range min {lo} > max {hi}")
            object.__setattr__(self, "rel_range", (float(lo), float(hi)))


@dataclass(frozen=True)
class SearchResult:
    entry: ImageEntry
    similarity: float
    gap: float
    rank: int


def match_exact(q: Signature, r: Signature) -> bool:
    """True when the signatures agree everywhere within EXACT_EPSILON."""
    return chebyshev_gap(q, r) <= EXACT_EPSILON


def match_probable(q: Signature, r: Signature, tolerance: int) -> bool:
    """True for exact matches, or when the shared mass reaches 100 - tolerance."""
    if not isinstance(tolerance, int) or isinstance(tolerance, bool):
        raise SearchError("tolerance must be an integer")
    if not 0 <= tolerance <= 100:
        raise SearchError(f"tolerance {tolerance} outside [0, 100]")
    return match_exact(q, r) or intersection_similarity(q, r) >= 100 - tolerance


def _default_fetch(url: str) -> bytes:
    resp = requests.get(url, timeout=30)
    resp.raise_for_status()
    return resp.content


def query_signature(
    query: Query, fetch: Callable[[str], bytes] | None = None
) -> Signature:
    """Resolve the query image to its signature (fetching URLs as needed)."""
    if isinstance(query.image_ref, bytes):
        data = query.image_ref
    else:
        try:
            data = (fetch or _default_fetch)(query.image_ref)
        except Exception as exc:
            raise SearchError(f"cannot fetch query image {query.image_ref!r}: {exc}") from exc
    try:
        return signature_of_bytes(data)
    except ImageDecodeError as exc:
        raise SearchError(f"cannot decode query image: {exc}") from exc


def execute_search(
    query: Query,
    repo: Repository,
    profiles: Mapping[str, DomainProfile] | None = None,
    fetch: Callable[[str], bytes] | None = None,
) -> list[SearchResult]:
    """Run the query against the repository's domain slice.

    The domain must be known: present among the loaded profiles or already
    holding entries.  Candidates come from ``repo.scan`` over the
    relevance range (defaulting to the domain's bounds), are matched per
    mode, and ranked deterministically.
    """
    known = (profiles is not None and query.domain in profiles) or (
        query.domain in repo.domains()
    )
    if not known:
        raise SearchError(f"unknown domain {query.domain!r}")

    q_sig = query_signature(query, fetch)

    rel_range = query.rel_range
    if rel_range is None and repo.count(query.domain) > 0:
        bounds = repo.domain_relevance_bounds(query.domain)
        rel_range = (float(bounds.rel_min), float(bounds.rel_max))

    matched: list[tuple[ImageEntry, float, float]] = []
    for entry in repo.scan(query.domain, rel_range):
        gap = chebyshev_gap(q_sig, entry.signature)
        sim = intersection_similarity(q_sig, entry.signature)
        if query.mode == "exact":
            ok = gap <= EXACT_EPSILON
        else:
            ok = gap <= EXACT_EPSILON or sim >= 100 - query.tolerance
        if ok:
            matched.append((entry, sim, gap))

    matched.sort(
        key=lambda item: (
            100.0 - item[1],
            -item[0].relevance,
            item[0].image_url,
            item[0].page_url,
        )
    )
    return [
        SearchResult(entry=e, similarity=sim, gap=gap, rank=i)
        for i, (e, sim, gap) in enumerate(matched, start=1)
    ]
