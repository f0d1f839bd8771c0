"""Domain ontologies and page relevance scoring.

A domain profile is a weighted vocabulary: each canonical term carries a
weight in [0, 1] and an optional list of synonyms.  The relevance of a page
to the domain is the sum over canonical terms of (occurrence count x weight),
where an occurrence of a synonym counts toward its canonical term.  A page
is considered domain-relevant when its relevance value strictly exceeds the
profile's relevance limit.

Matching rules, pinned so scores are reproducible:

* text is lowercased; Unicode letters and digits are word characters and
  everything else separates tokens;
* terms and synonyms are phrases matched as contiguous token sequences;
* scanning is left to right, trying the longest matching phrase first;
  tokens consumed by a match cannot participate in another match.
"""

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

__all__ = [
    "ProfileError",
    "OntologyTerm",
    "DomainProfile",
    "RelevanceScore",
    "tokenize",
    "load_domain_profile",
    "load_profiles_dir",
    "count_term_occurrences",
    "page_relevance",
    "is_domain_relevant",
]

# Unicode letters/digits only; underscore is a separator, unlike \w.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


class ProfileError(ValueError):
    """A profile document is malformed or violates a profile invariant."""


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercase word tokens."""
    return _WORD_RE.findall(text.lower())


def _check_phrase(phrase: object, what: str) -> list[str]:
    """Validate canonical phrase form and return its tokens.

    A phrase must be a nonempty, lowercase, internally single-spaced
    sequence of word tokens (no punctuation).
    """
    if not isinstance(phrase, str):
        raise ProfileError(f"{what} must be a string, got {type(phrase).__name__}")
    tokens = tokenize(phrase)
    if not tokens:
        raise ProfileError(f"{what} {phrase!r} contains no word characters")
    if " ".join(tokens) != phrase:
        raise ProfileError(
            f"{what} {phrase!r} is not in canonical form "
            "(lowercase words separated by single spaces)"
        )
    return tokens


@dataclass(frozen=True)
class OntologyTerm:
    """One weighted vocabulary entry with optional synonyms."""

    term: str
    weight: float
    synonyms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _check_phrase(self.term, "term")
        if not isinstance(self.weight, (int, float)) or isinstance(self.weight, bool):
            raise ProfileError(f"weight of {self.term!r} must be a number")
        if not 0.0 <= float(self.weight) <= 1.0:
            raise ProfileError(
                f"weight of {self.term!r} is {self.weight!r}, must lie in [0, 1]"
            )
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "synonyms", tuple(self.synonyms))
        for syn in self.synonyms:
            _check_phrase(syn, f"synonym of {self.term!r}")
            if syn == self.term:
                raise ProfileError(f"synonym of {self.term!r} equals the term itself")


@dataclass(frozen=True)
class DomainProfile:
    """A named domain: its vocabulary and relevance cut-off."""

    name: str
    relevance_limit: float
    terms: tuple[OntologyTerm, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ProfileError("profile name must be a nonempty string")
        if not isinstance(self.relevance_limit, (int, float)) or isinstance(
            self.relevance_limit, bool
        ):
            raise ProfileError("relevance_limit must be a number")
        if float(self.relevance_limit) < 0.0:
            raise ProfileError(
                f"relevance_limit is {self.relevance_limit!r}, must be >= 0"
            )
        object.__setattr__(self, "relevance_limit", float(self.relevance_limit))
        object.__setattr__(self, "terms", tuple(self.terms))

        canonical = set()
        for t in self.terms:
            if t.term in canonical:
                raise ProfileError(f"duplicate canonical term {t.term!r}")
            canonical.add(t.term)
        seen_syn = set()
        for t in self.terms:
            for syn in t.synonyms:
                if syn in canonical:
                    # Would make phrase matching ambiguous.
                    raise ProfileError(
                        f"synonym {syn!r} of {t.term!r} equals a canonical term"
                    )
                if syn in seen_syn:
                    raise ProfileError(f"synonym {syn!r} appears more than once")
                seen_syn.add(syn)

    @cached_property
    def weights(self) -> dict[str, float]:
        """Canonical term -> weight."""
        return {t.term: t.weight for t in self.terms}

    @cached_property
    def _phrase_table(self) -> dict[tuple[str, ...], str]:
        """Token tuple of every term/synonym phrase -> canonical term."""
        table: dict[tuple[str, ...], str] = {}
        for t in self.terms:
            table[tuple(t.term.split(" "))] = t.term
            for syn in t.synonyms:
                table[tuple(syn.split(" "))] = t.term
        return table

    @cached_property
    def _max_phrase_len(self) -> int:
        return max((len(k) for k in self._phrase_table), default=0)


@dataclass(frozen=True)
class RelevanceScore:
    """A page's relevance value and its per-term breakdown.

    ``per_term`` maps every canonical term to ``(count, contribution)``
    with ``contribution = count * weight``; ``value`` is the sum of the
    contributions.
    """

    value: float
    per_term: dict[str, tuple[int, float]] = field(default_factory=dict)


def _profile_from_mapping(data: object, origin: str) -> DomainProfile:
    if not isinstance(data, dict):
        raise ProfileError(f"{origin}: profile document must be a JSON object")
    unknown = set(data) - {"name", "relevance_limit", "terms"}
    if unknown:
        raise ProfileError(f"{origin}: unknown keys {sorted(unknown)!r}")
    try:
        name = data["name"]
        limit = data["relevance_limit"]
        raw_terms = data["terms"]
    except KeyError as exc:
        raise ProfileError(f"{origin}: missing key {exc.args[0]!r}") from None
    if not isinstance(raw_terms, list):
        raise ProfileError(f"{origin}: 'terms' must be a list")
    terms = []
    for i, item in enumerate(raw_terms):
        if not isinstance(item, dict):
            raise ProfileError(f"{origin}: terms[{i}] must be an object")
        extra = set(item) - {"term", "weight", "synonyms"}
        if extra:
            raise ProfileError(f"{origin}: terms[{i}] has unknown keys {sorted(extra)!r}")
        if "term" not in item or "weight" not in item:
            raise ProfileError(f"{origin}: terms[{i}] needs 'term' and 'weight'")
        syns = item.get("synonyms", [])
        if not isinstance(syns, list):
            raise ProfileError(f"{origin}: terms[{i}].synonyms must be a list")
        terms.append(OntologyTerm(item["term"], item["weight"], tuple(syns)))
    return DomainProfile(name=name, relevance_limit=limit, terms=tuple(terms))


def load_domain_profile(source: str | Path) -> DomainProfile:
    """Load and validate a profile document (JSON, UTF-8) from ``source``.

    The document looks like::

        {"name": "cricket", "relevance_limit": 4.0,
         "terms": [{"term": "match", "weight": 0.1,
                    "synonyms": ["competition", "contest"]}, ...]}

    Raises :class:`ProfileError` on malformed documents or any invariant
    violation (duplicate canonical term, weight outside [0, 1], ...).
    """
    path = Path(source)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProfileError(f"cannot read profile {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"{path}: not valid JSON: {exc}") from exc
    return _profile_from_mapping(data, str(path))


def load_profiles_dir(directory: str | Path) -> dict[str, DomainProfile]:
    """Load every ``*.json`` profile in ``directory``, keyed by profile name."""
    profiles: dict[str, DomainProfile] = {}
    for path in sorted(Path(directory).glob("*.json")):
        profile = load_domain_profile(path)
        if profile.name in profiles:
            raise ProfileError(f"duplicate profile name {profile.name!r} in {directory}")
        profiles[profile.name] = profile
    return profiles


def count_term_occurrences(text: str, profile: DomainProfile) -> dict[str, int]:
    """Count occurrences of every canonical term (synonyms included) in ``text``.

    Counting is case-insensitive over whitespace/punctuation-normalized
    tokens.  Multi-word phrases match contiguously; at each position the
    longest matching phrase wins and its tokens are consumed, so overlapping
    phrases are never double-counted.  Returns a count for every canonical
    term of the profile (zero when absent).
    """
    counts = {t.term: 0 for t in profile.terms}
    table = profile._phrase_table
    max_len = profile._max_phrase_len
    if max_len == 0:
        return counts
    tokens = tokenize(text)
    n = len(tokens)
    i = 0
    while i < n:
        for length in range(min(max_len, n - i), 0, -1):
            canon = table.get(tuple(tokens[i : i + length]))
            if canon is not None:
                counts[canon] += 1
                i += length
                break
        else:
            i += 1
    return counts


def page_relevance(counts: dict[str, int], profile: DomainProfile) -> RelevanceScore:
    """Compute the relevance value ``sum(count * weight)`` over the profile.

    ``counts`` maps canonical terms to nonnegative occurrence counts; terms
    absent from ``counts`` contribute zero.  Raises :class:`KeyError` for a
    counted term unknown to the profile.
    """
    weights = profile.weights
    for key in counts:
        if key not in weights:
            raise KeyError(f"unknown term {key!r} for domain {profile.name!r}")
    per_term: dict[str, tuple[int, float]] = {}
    value = 0.0
    for term in profile.terms:
        count = int(counts.get(term.term, 0))
        contribution = count * term.weight
        per_term[term.term] = (count, contribution)
        value += contribution
    return RelevanceScore(value=value, per_term=per_term)


def is_domain_relevant(score: RelevanceScore, profile: DomainProfile) -> bool:
    """True iff the relevance value strictly exceeds the profile's limit."""
    return score.value > profile.relevance_limit
