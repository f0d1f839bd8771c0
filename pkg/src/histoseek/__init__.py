"""histoseek: domain-specific image search over grayscale histogram signatures.

Pages are crawled breadth-wise from seed URLs, gated by ontology-weighted
relevance, and every harvested image is indexed as a 256-bin
percentage-of-pixels signature that is independent of the image's original
size and color.  Queries are image-to-image, with exact or
tolerance-bounded matching.
"""

from .imaging import (
    GrayImage,
    Histogram,
    ImageDecodeError,
    Signature,
    chebyshev_gap,
    decode_image,
    histogram,
    intersection_similarity,
    signature,
    signature_of_bytes,
    to_gray8,
)
from .ontology import (
    DomainProfile,
    OntologyTerm,
    ProfileError,
    RelevanceScore,
    count_term_occurrences,
    is_domain_relevant,
    load_domain_profile,
    load_profiles_dir,
    page_relevance,
)
from .repository import DomainBounds, ImageEntry, Repository, RepositoryError
from .search import (
    EXACT_EPSILON,
    Query,
    SearchError,
    SearchResult,
    execute_search,
    match_exact,
    match_probable,
)

__version__ = "0.1.0"

__all__ = [
    "GrayImage",
    "Histogram",
    "ImageDecodeError",
    "Signature",
    "chebyshev_gap",
    "decode_image",
    "histogram",
    "intersection_similarity",
    "signature",
    "signature_of_bytes",
    "to_gray8",
    "DomainProfile",
    "OntologyTerm",
    "ProfileError",
    "RelevanceScore",
    "count_term_occurrences",
    "is_domain_relevant",
    "load_domain_profile",
    "load_profiles_dir",
    "page_relevance",
    "DomainBounds",
    "ImageEntry",
    "Repository",
    "RepositoryError",
    "EXACT_EPSILON",
    "Query",
    "SearchError",
    "SearchResult",
    "execute_search",
    "match_exact",
    "match_probable",
    "__version__",
]
