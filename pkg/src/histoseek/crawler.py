"""Breadth-wise, relevance-gated crawling.

Starting from the seed URLs the crawler fetches pages in BFS order,
scores each page's extracted text against the domain profile, and hands
the images of pages scoring strictly above the relevance limit to the
repository.  Links are followed from every fetched page (the relevance
gate applies to image harvesting, not to frontier growth), each canonical
URL is fetched at most once, and the crawl halts when the frontier is
empty or ``max_pages`` fetches have been attempted.

Politeness: fetches to one host are serialized with a configurable
minimum delay, and robots.txt Disallow rules are honored by default.
"""

import threading
import time
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit, urlunsplit
from urllib.robotparser import RobotFileParser

import requests

from .htmltools import parse_page
from .imaging import signature_of_bytes
from .ontology import (
    DomainProfile,
    RelevanceScore,
    count_term_occurrences,
    is_domain_relevant,
    page_relevance,
)
from .repository import ImageEntry, Repository, utc_now_rfc3339

__all__ = [
    "CrawlConfig",
    "PageRecord",
    "CrawlFrontier",
    "CrawlReport",
    "FetchResult",
    "HttpFetcher",
    "canonicalize_url",
    "crawl",
]

DEFAULT_USER_AGENT = "histoseek/0.1"

_HTML_TYPES = ("text/html", "application/xhtml+xml")


def _remove_dot_segments(path: str) -> str:
    # RFC 3986 section 5.2.4.
    out: list[str] = []
    for segment in path.split("/"):
        if segment == ".":
            continue
        if segment == "..":
            if out and out[-1] != "":
                out.pop()
                if not out:
                    out = [""]
        else:
            out.append(segment)
    if path.startswith("/") and (not out or out[0] != ""):
        out.insert(0, "")
    resolved = "/".join(out)
    if path.endswith(("/.", "/..")) and not resolved.endswith("/"):
        resolved += "/"
    return resolved


def canonicalize_url(url: str) -> str:
    """Canonical form used for frontier deduplication.

    Lowercases scheme and host, strips the fragment, and resolves
    dot-segments in the path.  Query strings are preserved.
    """
    parts = urlsplit(url)
    host = parts.hostname.lower() if parts.hostname else ""
    netloc = host
    if parts.port is not None:
        netloc += f":{parts.port}"
    if parts.username:
        cred = parts.username + (f":{parts.password}" if parts.password else "")
        netloc = f"{cred}@{netloc}"
    return urlunsplit(
        (
            parts.scheme.lower(),
            netloc,
            _remove_dot_segments(parts.path),
            parts.query,
            "",
        )
    )


@dataclass(frozen=True)
class CrawlConfig:
    """Crawl limits and behavior switches."""

    seeds: tuple[str, ...]
    max_pages: int = 200
    max_depth: int = 3
    per_host_delay: float = 0.0
    same_host_only: bool = True
    user_agent: str = DEFAULT_USER_AGENT
    respect_robots: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "seeds", tuple(self.seeds))
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if self.max_pages < 1:
            raise ValueError("max_pages must be >= 1")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.per_host_delay < 0:
            raise ValueError("per_host_delay must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class PageRecord:
    """One fetched page: its score and the image references it carried."""

    url: str
    depth: int
    relevance: RelevanceScore
    image_refs: tuple[str, ...]
    fetched_at: str


class CrawlFrontier:
    """FIFO queue of (url, depth); each canonical URL is admitted once."""

    def __init__(self) -> None:
        self._queue: deque[tuple[str, int]] = deque()
        self.visited: set[str] = set()
        self._lock = threading.Lock()

    def add(self, url: str, depth: int) -> bool:
        canon = canonicalize_url(url)
        with self._lock:
            if canon in self.visited:
                return False
            self.visited.add(canon)
            self._queue.append((canon, depth))
            return True

    def mark_visited(self, url: str) -> None:
        with self._lock:
            self.visited.add(canonicalize_url(url))

    def pop(self) -> tuple[str, int] | None:
        with self._lock:
            return self._queue.popleft() if self._queue else None

    def __len__(self) -> int:
        with self._lock:
            return len(self._queue)


@dataclass
class CrawlReport:
    """Outcome counters; pages_fetched = relevant + irrelevant + errored."""

    pages_fetched: int = 0
    pages_relevant: int = 0
    pages_irrelevant: int = 0
    pages_errored: int = 0
    pages_skipped_robots: int = 0
    images_indexed: int = 0
    image_errors: int = 0
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pages_fetched": self.pages_fetched,
            "pages_relevant": self.pages_relevant,
            "pages_irrelevant": self.pages_irrelevant,
            "pages_errored": self.pages_errored,
            "pages_skipped_robots": self.pages_skipped_robots,
            "images_indexed": self.images_indexed,
            "image_errors": self.image_errors,
            "errors": list(self.errors),
        }


@dataclass(frozen=True)
class FetchResult:
    url: str
    status: int
    content_type: str
    body: bytes


class HttpFetcher:
    """requests-backed fetcher; raises on network failures."""

    def __init__(self, user_agent: str = DEFAULT_USER_AGENT, timeout: float = 10.0):
        self.timeout = timeout
        self._session = requests.Session()
        self._session.headers["User-Agent"] = user_agent

    def fetch(self, url: str) -> FetchResult:
        resp = self._session.get(url, timeout=self.timeout)
        ctype = resp.headers.get("Content-Type", "").split(";")[0].strip().lower()
        return FetchResult(
            url=str(resp.url), status=resp.status_code, content_type=ctype, body=resp.content
        )


class _Politeness:
    """Per-host serialization with a minimum delay between requests."""

    def __init__(self, delay: float):
        self.delay = delay
        self._lock = threading.Lock()
        self._host_locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}

    def _lock_for(self, host: str) -> threading.Lock:
        with self._lock:
            return self._host_locks.setdefault(host, threading.Lock())

    def wait_turn(self, url: str) -> None:
        host = (urlsplit(url).hostname or "").lower()
        with self._lock_for(host):
            if self.delay > 0:
                elapsed = time.monotonic() - self._last.get(host, -self.delay)
                if elapsed < self.delay:
                    time.sleep(self.delay - elapsed)
            self._last[host] = time.monotonic()


class _Crawl:
    def __init__(
        self,
        config: CrawlConfig,
        profile: DomainProfile,
        sink: Repository,
        fetcher,
        on_page: Callable[[PageRecord], None] | None,
    ):
        self.config = config
        self.profile = profile
        self.sink = sink
        self.fetcher = fetcher
        self.on_page = on_page
        self.report = CrawlReport()
        self.frontier = CrawlFrontier()
        self.politeness = _Politeness(config.per_host_delay)
        self.seed_hosts = {
            (urlsplit(s).hostname or "").lower() for s in config.seeds
        }
        self._robots: dict[str, RobotFileParser | None] = {}
        self._robots_lock = threading.Lock()
        self._report_lock = threading.Lock()

    # -- robots -----------------------------------------------------------

    def _robots_for(self, url: str) -> RobotFileParser | None:
        parts = urlsplit(url)
        host_key = f"{parts.scheme.lower()}://{(parts.hostname or '').lower()}"
        if parts.port is not None:
            host_key += f":{parts.port}"
        with self._robots_lock:
            if host_key in self._robots:
                return self._robots[host_key]
        robots_url = f"{host_key}/robots.txt"
        parser: RobotFileParser | None = None
        try:
            self.politeness.wait_turn(robots_url)
            result = self.fetcher.fetch(robots_url)
            if result.status == 200:
                parser = RobotFileParser(robots_url)
                parser.parse(result.body.decode("utf-8", errors="replace").splitlines())
        except Exception:
            parser = None  # unreachable robots.txt: allow all
        with self._robots_lock:
            self._robots[host_key] = parser
        return parser

    def _allowed(self, url: str) -> bool:
        if not self.config.respect_robots:
            return True
        parser = self._robots_for(url)
        return parser is None or parser.can_fetch(self.config.user_agent, url)

    # -- single page ------------------------------------------------------

    def _fetch_page(self, url: str):
        self.politeness.wait_turn(url)
        return self.fetcher.fetch(url)

    def _harvest_images(self, page_url: str, refs: list[str], score: RelevanceScore) -> None:
        for image_url in refs:
            if not self._allowed(image_url):
                with self._report_lock:
                    self.report.image_errors += 1
                    self.report.errors.append(f"image {image_url}: robots disallow")
                continue
            try:
                self.politeness.wait_turn(image_url)
                result = self.fetcher.fetch(image_url)
                if result.status >= 400:
                    raise RuntimeError(f"HTTP {result.status}")
                sig = signature_of_bytes(result.body)
            except Exception as exc:
                with self._report_lock:
                    self.report.image_errors += 1
                    self.report.errors.append(f"image {image_url}: {exc}")
                continue
            entry = ImageEntry.create(
                image_url=image_url,
                page_url=page_url,
                domain=self.profile.name,
                relevance=score.value,
                signature=sig,
            )
            self.sink.insert_entry(
                entry, image_bytes=result.body, content_type=result.content_type
            )
            with self._report_lock:
                self.report.images_indexed += 1

    def _process(self, url: str, depth: int) -> tuple[bool, list[str]]:
        """Fetch and handle one page.

        Returns (fetch_attempted, links to enqueue).
        """
        if not self._allowed(url):
            with self._report_lock:
                self.report.pages_skipped_robots += 1
            return False, []
        try:
            result = self._fetch_page(url)
            if result.status >= 400:
                raise RuntimeError(f"HTTP {result.status}")
        except Exception as exc:
            with self._report_lock:
                self.report.pages_fetched += 1
                self.report.pages_errored += 1
                self.report.errors.append(f"page {url}: {exc}")
            return True, []

        self.frontier.mark_visited(result.url)  # redirect target
        is_html = not result.content_type or result.content_type.startswith(_HTML_TYPES)
        if not is_html:
            with self._report_lock:
                self.report.pages_fetched += 1
                self.report.pages_irrelevant += 1
            return True, []

        content = parse_page(result.body, result.url)
        counts = count_term_occurrences(content.text, self.profile)
        score = page_relevance(counts, self.profile)
        relevant = is_domain_relevant(score, self.profile)
        with self._report_lock:
            self.report.pages_fetched += 1
            if relevant:
                self.report.pages_relevant += 1
            else:
                self.report.pages_irrelevant += 1
        if self.on_page is not None:
            self.on_page(
                PageRecord(
                    url=url,
                    depth=depth,
                    relevance=score,
                    image_refs=tuple(content.image_refs),
                    fetched_at=utc_now_rfc3339(),
                )
            )
        if relevant:
            self._harvest_images(url, content.image_refs, score)

        links: list[str] = []
        if depth < self.config.max_depth:
            for link in content.links:
                host = (urlsplit(link).hostname or "").lower()
                if self.config.same_host_only and host not in self.seed_hosts:
                    continue
                links.append(link)
        return True, links

    # -- drivers ----------------------------------------------------------

    def run_sequential(self) -> None:
        for seed in self.config.seeds:
            self.frontier.add(seed, 0)
        while self.report.pages_fetched < self.config.max_pages:
            item = self.frontier.pop()
            if item is None:
                break
            url, depth = item
            _, links = self._process(url, depth)
            for link in links:
                self.frontier.add(link, depth + 1)

    def run_pooled(self) -> None:
        for seed in self.config.seeds:
            self.frontier.add(seed, 0)
        issued = 0
        pending = {}
        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            while True:
                while issued < self.config.max_pages and len(pending) < self.config.workers:
                    item = self.frontier.pop()
                    if item is None:
                        break
                    url, depth = item
                    issued += 1
                    pending[pool.submit(self._process, url, depth)] = depth
                if not pending:
                    break
                done, _ = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    depth = pending.pop(fut)
                    attempted, links = fut.result()
                    if not attempted:
                        issued -= 1  # robots skip: refund the page budget
                    for link in links:
                        self.frontier.add(link, depth + 1)


def crawl(
    config: CrawlConfig,
    profile: DomainProfile,
    sink: Repository,
    fetcher=None,
    on_page: Callable[[PageRecord], None] | None = None,
) -> CrawlReport:
    """Run a crawl and return its report.

    ``fetcher`` needs a ``fetch(url) -> FetchResult`` method; the default
    talks HTTP via requests.  Network failures and undecodable images are
    recorded in the report, never fatal.  With ``workers=1`` the crawl is
    fully deterministic given a deterministic fetcher.
    """
    if fetcher is None:
        fetcher = HttpFetcher(config.user_agent)
    run = _Crawl(config, profile, sink, fetcher, on_page)
    if config.workers <= 1:
        run.run_sequential()
    else:
        run.run_pooled()
    return run.report
