"""HTML text, link, and image-reference extraction for the crawler.

Built on the stdlib tolerant parser: garbage in, best-effort text out.
Script/style content is dropped, entities are decoded, and URLs are
resolved against the page URL per RFC 3986.
"""

from html.parser import HTMLParser
from urllib.parse import urldefrag, urljoin, urlsplit

__all__ = ["PageContent", "parse_page", "extract_text", "extract_links", "extract_image_refs"]

# Elements whose text content is never page text.
_NON_TEXT = {"script", "style", "noscript", "template"}


class _PageParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.text_parts: list[str] = []
        self.hrefs: list[str] = []
        self.srcs: list[str] = []
        self._suppress = 0

    def handle_starttag(self, tag, attrs):
        if tag in _NON_TEXT:
            self._suppress += 1
        self._collect(tag, attrs)

    def handle_startendtag(self, tag, attrs):
        self._collect(tag, attrs)

    def handle_endtag(self, tag):
        if tag in _NON_TEXT and self._suppress > 0:
            self._suppress -= 1

    def handle_data(self, data):
        if not self._suppress and data:
            self.text_parts.append(data)

    def _collect(self, tag, attrs):
        if tag == "a":
            for name, value in attrs:
                if name == "href" and value:
                    self.hrefs.append(value)
        elif tag == "img":
            for name, value in attrs:
                if name == "src" and value:
                    self.srcs.append(value)


class PageContent:
    """One-pass parse result: plain text, link URLs, image URLs."""

    __slots__ = ("text", "links", "image_refs")

    def __init__(self, text: str, links: list[str], image_refs: list[str]):
        self.text = text
        self.links = links
        self.image_refs = image_refs


def _to_str(html: str | bytes) -> str:
    if isinstance(html, bytes):
        return html.decode("utf-8", errors="replace")
    return html


def _resolve(raw: str, base: str) -> str | None:
    """Absolutize ``raw`` against ``base``; http(s) only, fragment stripped."""
    absolute = urljoin(base, raw.strip())
    if urlsplit(absolute).scheme not in ("http", "https"):
        return None
    return urldefrag(absolute)[0]


def _resolve_all(raws: list[str], base: str) -> list[str]:
    seen: set[str] = set()
    out: list[str] = []
    for raw in raws:
        url = _resolve(raw, base)
        if url is not None and url not in seen:
            seen.add(url)
            out.append(url)
    return out


def parse_page(html: str | bytes, base: str) -> PageContent:
    """Extract text, links, and image refs from ``html`` in a single pass."""
    parser = _PageParser()
    parser.feed(_to_str(html))
    parser.close()
    text = " ".join(" ".join(parser.text_parts).split())
    return PageContent(
        text=text,
        links=_resolve_all(parser.hrefs, base),
        image_refs=_resolve_all(parser.srcs, base),
    )


def extract_text(html: str | bytes) -> str:
    """Plain text of ``html``: tags stripped, script/style content removed,
    entities decoded, whitespace normalized."""
    return parse_page(html, "http://localhost/").text


def extract_links(html: str | bytes, base: str) -> list[str]:
    """Anchor targets resolved against ``base``; fragments stripped and
    non-http(s) schemes dropped; deduplicated, first-seen order."""
    return parse_page(html, base).links


def extract_image_refs(html: str | bytes, base: str) -> list[str]:
    """``img src`` URLs resolved against ``base``, deduplicated in
    first-seen order."""
    return parse_page(html, base).image_refs
