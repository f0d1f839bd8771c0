"""Shared fixtures: domain profiles, a local fixture web site, and the
acceptance-criteria summary printer."""

import json
import threading
from functools import partial
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np
import pytest

from histoseek.ontology import load_domain_profile

from imagegen import encode, solid_png

# -- domain profiles ------------------------------------------------------

CRICKET_PROFILE = {
    "name": "cricket",
    "relevance_limit": 4.0,
    "terms": [
        {"term": "cricket", "weight": 0.9, "synonyms": []},
        {"term": "wicket keeper", "weight": 0.8, "synonyms": []},
        {"term": "umpire", "weight": 0.4, "synonyms": ["judge", "moderator", "referee"]},
        {"term": "bat", "weight": 0.2, "synonyms": []},
        {"term": "match", "weight": 0.1, "synonyms": ["competition", "contest"]},
    ],
}

CAMPUS_PROFILE = {
    "name": "campus",
    "relevance_limit": 4.0,
    "terms": [
        {"term": "student", "weight": 0.4, "synonyms": []},
        {"term": "lecturer", "weight": 0.8, "synonyms": []},
        {"term": "associate professor", "weight": 1.0, "synonyms": []},
    ],
}

# Text holding student x3, lecturer x2, associate professor x2.
CAMPUS_TEXT = (
    "The student met a lecturer. Another student and an associate professor "
    "talked; the associate professor praised the lecturer while a third "
    "student listened."
)


def write_profile(path: Path, data: dict) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def cricket_profile(tmp_path):
    return load_domain_profile(write_profile(tmp_path / "cricket.json", CRICKET_PROFILE))


@pytest.fixture
def campus_profile(tmp_path):
    return load_domain_profile(write_profile(tmp_path / "campus.json", CAMPUS_PROFILE))


# -- local fixture site ---------------------------------------------------


class _QuietHandler(SimpleHTTPRequestHandler):
    def log_message(self, *args):
        pass


class LocalSite:
    """A directory served over HTTP on an ephemeral localhost port."""

    def __init__(self, root: Path):
        self.root = root
        handler = partial(_QuietHandler, directory=str(root))
        self.server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def base_url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}"

    def url(self, name: str) -> str:
        return f"{self.base_url}/{name}"

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def serve_dir(tmp_path):
    """Start a LocalSite over a fresh temp directory."""
    site = LocalSite(tmp_path)
    yield site
    site.stop()


def page_html(title: str, term_words: list[str], links: list[str], images: list[str]) -> str:
    """A fixture page whose visible text contains exactly ``term_words``."""
    body = " ".join(term_words)
    anchors = "".join(f'<a href="{href}">next</a>' for href in links)
    imgs = "".join(f'<img src="{src}">' for src in images)
    return (
        f"<html><head><title>{title}</title>"
        "<script>var ignored = 'cricket cricket';</script></head>"
        f"<body><p>{body}</p>{imgs}{anchors}</body></html>"
    )


def build_site(
    root: Path,
    pages: dict[str, tuple[list[str], list[str], list[str]]],
    rng: np.random.Generator | None = None,
) -> None:
    """Write fixture pages + distinct images.

    ``pages`` maps filename -> (term_words, links, image names); every
    named image is written as a small distinct PNG.
    """
    rng = rng or np.random.default_rng(1234)
    image_names = set()
    for name, (words, links, images) in pages.items():
        (root / name).write_text(page_html(name, words, links, images), encoding="utf-8")
        image_names.update(images)
    for img in sorted(image_names):
        color = rng.integers(0, 256, size=3)
        (root / img).write_bytes(solid_png(*[int(c) for c in color], size=6))


# -- acceptance summary ---------------------------------------------------

_acceptance_reports: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    _acceptance_reports.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_reports:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _acceptance_reports:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")
