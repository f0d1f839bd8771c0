"""SQLite-backed store of indexed images and their signatures.

One file on disk holds every :class:`ImageEntry` plus an optional blob
cache of the original image bytes (keyed by content hash) for thumbnails.
The portable interchange format is JSON Lines, one entry per line::

    {"id": "...", "image_url": "...", "page_url": "...", "domain": "cricket",
     "relevance": 4.8, "signature": [256 decimals], "indexed_at": "RFC3339"}

Signatures are stored as raw little-endian float64 and exported as
shortest round-trip decimals, so export/import cycles are bit-exact.
"""

import hashlib
import json
import math
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

import numpy as np

from .imaging import SIGNATURE_BINS, Signature

__all__ = ["RepositoryError", "ImageEntry", "DomainBounds", "Repository", "entry_id", "utc_now_rfc3339"]


class RepositoryError(Exception):
    """Storage failure or malformed interchange data."""


def utc_now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def entry_id(image_url: str, page_url: str, domain: str) -> str:
    """Stable identifier for the upsert key (image_url, page_url, domain)."""
    key = "\n".join((image_url, page_url, domain)).encode("utf-8")
    return hashlib.sha256(key).hexdigest()[:24]


@dataclass(frozen=True)
class ImageEntry:
    """An indexed image: where it was found, how relevant the page was,
    and its signature."""

    id: str
    image_url: str
    page_url: str
    domain: str
    relevance: float
    signature: Signature
    indexed_at: str

    @classmethod
    def create(
        cls,
        image_url: str,
        page_url: str,
        domain: str,
        relevance: float,
        signature: Signature,
        indexed_at: str | None = None,
    ) -> "ImageEntry":
        return cls(
            id=entry_id(image_url, page_url, domain),
            image_url=image_url,
            page_url=page_url,
            domain=domain,
            relevance=float(relevance),
            signature=signature,
            indexed_at=indexed_at or utc_now_rfc3339(),
        )


@dataclass(frozen=True)
class DomainBounds:
    """Floor/ceiling envelope of a domain's stored relevance values."""

    domain: str
    rel_min: int
    rel_max: int


_SCHEMA = """
CREATE TABLE IF NOT EXISTS entries (
    id          TEXT PRIMARY KEY,
    image_url   TEXT NOT NULL,
    page_url    TEXT NOT NULL,
    domain      TEXT NOT NULL,
    relevance   REAL NOT NULL,
    signature   BLOB NOT NULL,
    indexed_at  TEXT NOT NULL,
    thumb_hash  TEXT,
    UNIQUE (image_url, page_url, domain)
);
CREATE INDEX IF NOT EXISTS idx_entries_domain ON entries(domain, relevance);
CREATE TABLE IF NOT EXISTS blobs (
    hash         TEXT PRIMARY KEY,
    content_type TEXT,
    data         BLOB NOT NULL
);
"""


def _pack_signature(sig: Signature) -> bytes:
    return sig.p.astype("<f8").tobytes()


def _unpack_signature(blob: bytes) -> Signature:
    arr = np.frombuffer(blob, dtype="<f8")
    if arr.shape != (SIGNATURE_BINS,):
        raise RepositoryError(f"stored signature has {arr.size} entries")
    return Signature(arr.astype(np.float64))


class Repository:
    """Single-writer, many-reader store of image entries.

    Each instance owns one SQLite connection; insertions are serialized
    internally so a multi-worker crawl can share the handle.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            self._conn = sqlite3.connect(self.path, check_same_thread=False)
            self._conn.executescript(_SCHEMA)
            self._conn.commit()
        except sqlite3.Error as exc:
            raise RepositoryError(f"cannot open repository {path}: {exc}") from exc
        self._write_lock = threading.Lock()

    def __enter__(self) -> "Repository":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def close(self) -> None:
        self._conn.close()

    # -- writes ---------------------------------------------------------

    def insert_entry(
        self,
        entry: ImageEntry,
        image_bytes: bytes | None = None,
        content_type: str | None = None,
    ) -> str:
        """Insert or replace the entry for (image_url, page_url, domain).

        Optionally caches the raw image bytes (by content hash) for the
        thumbnail endpoint.  Returns the entry id.
        """
        thumb_hash = None
        if image_bytes is not None:
            thumb_hash = hashlib.sha256(image_bytes).hexdigest()
        try:
            with self._write_lock, self._conn:
                if image_bytes is not None:
                    self._conn.execute(
                        "INSERT OR REPLACE INTO blobs (hash, content_type, data) VALUES (?, ?, ?)",
                        (thumb_hash, content_type, image_bytes),
                    )
                self._conn.execute(
                    """
                    INSERT INTO entries
                        (id, image_url, page_url, domain, relevance, signature, indexed_at, thumb_hash)
                    VALUES (?, ?, ?, ?, ?, ?, ?, ?)
                    ON CONFLICT (image_url, page_url, domain) DO UPDATE SET
                        relevance = excluded.relevance,
                        signature = excluded.signature,
                        indexed_at = excluded.indexed_at,
                        thumb_hash = COALESCE(excluded.thumb_hash, entries.thumb_hash)
                    """,
                    (
                        entry.id,
                        entry.image_url,
                        entry.page_url,
                        entry.domain,
                        entry.relevance,
                        _pack_signature(entry.signature),
                        entry.indexed_at,
                        thumb_hash,
                    ),
                )
        except sqlite3.Error as exc:
            raise RepositoryError(f"insert failed: {exc}") from exc
        return entry.id

    # -- reads ----------------------------------------------------------

    def count(self, domain: str | None = None) -> int:
        if domain is None:
            row = self._conn.execute("SELECT COUNT(*) FROM entries").fetchone()
        else:
            row = self._conn.execute(
                "SELECT COUNT(*) FROM entries WHERE domain = ?", (domain,)
            ).fetchone()
        return int(row[0])

    def domains(self) -> list[str]:
        rows = self._conn.execute(
            "SELECT DISTINCT domain FROM entries ORDER BY domain"
        ).fetchall()
        return [r[0] for r in rows]

    def domain_relevance_bounds(self, domain: str) -> DomainBounds:
        """[floor(min relevance), ceiling(max relevance)] over the domain.

        Raises :class:`RepositoryError` when the domain has no entries.
        """
        row = self._conn.execute(
            "SELECT MIN(relevance), MAX(relevance) FROM entries WHERE domain = ?",
            (domain,),
        ).fetchone()
        if row[0] is None:
            raise RepositoryError(f"domain {domain!r} has no entries")
        return DomainBounds(
            domain=domain,
            rel_min=math.floor(row[0]),
            rel_max=math.ceil(row[1]),
        )

    def _entry_from_row(self, row) -> ImageEntry:
        return ImageEntry(
            id=row[0],
            image_url=row[1],
            page_url=row[2],
            domain=row[3],
            relevance=row[4],
            signature=_unpack_signature(row[5]),
            indexed_at=row[6],
        )

    def get_entry(self, id: str) -> ImageEntry | None:
        row = self._conn.execute(
            "SELECT id, image_url, page_url, domain, relevance, signature, indexed_at"
            " FROM entries WHERE id = ?",
            (id,),
        ).fetchone()
        return self._entry_from_row(row) if row else None

    def scan(
        self, domain: str, rel_range: tuple[float, float] | None = None
    ) -> Iterator[ImageEntry]:
        """Entries of ``domain`` with relevance in the inclusive range,
        ordered by id (deterministic)."""
        sql = (
            "SELECT id, image_url, page_url, domain, relevance, signature, indexed_at"
            " FROM entries WHERE domain = ?"
        )
        params: list[object] = [domain]
        if rel_range is not None:
            lo, hi = float(rel_range[0]), float(rel_range[1])
            if lo > hi:
                raise ValueError(f"relevance range min {lo} > max {hi}")
            sql += " AND relevance BETWEEN ? AND ?"
            params += [lo, hi]
        sql += " ORDER BY id"
        for row in self._conn.execute(sql, params):
            yield self._entry_from_row(row)

    def get_thumb(self, id: str) -> tuple[bytes, str | None] | None:
        """Cached image bytes for an entry, or None when uncached."""
        row = self._conn.execute(
            "SELECT b.data, b.content_type FROM entries e JOIN blobs b"
            " ON e.thumb_hash = b.hash WHERE e.id = ?",
            (id,),
        ).fetchone()
        if row is None:
            return None
        return bytes(row[0]), row[1]

    # -- interchange ------------------------------------------------------

    def export_jsonl(self, path: str | Path) -> int:
        """Write every entry as one JSON line; returns the entry count."""
        n = 0
        try:
            with open(path, "w", encoding="utf-8") as fh:
                for row in self._conn.execute(
                    "SELECT id, image_url, page_url, domain, relevance, signature, indexed_at"
                    " FROM entries ORDER BY id"
                ):
                    entry = self._entry_from_row(row)
                    fh.write(
                        json.dumps(
                            {
                                "id": entry.id,
                                "image_url": entry.image_url,
                                "page_url": entry.page_url,
                                "domain": entry.domain,
                                "relevance": entry.relevance,
                                "signature": entry.signature.to_list(),
                                "indexed_at": entry.indexed_at,
                            },
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
                    n += 1
        except OSError as exc:
            raise RepositoryError(f"export to {path} failed: {exc}") from exc
        return n

    def import_jsonl(self, path: str | Path) -> int:
        """Upsert entries from a JSON Lines file; returns the line count.

        A malformed line aborts the import with its line number.
        """
        n = 0
        try:
            fh = open(path, "r", encoding="utf-8")
        except OSError as exc:
            raise RepositoryError(f"cannot read {path}: {exc}") from exc
        with fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                    sig = Signature.from_values(data["signature"])
                    entry = ImageEntry(
                        id=data["id"],
                        image_url=data["image_url"],
                        page_url=data["page_url"],
                        domain=data["domain"],
                        relevance=float(data["relevance"]),
                        signature=sig,
                        indexed_at=data["indexed_at"],
                    )
                except (KeyError, TypeError, ValueError) as exc:
                    raise RepositoryError(f"{path}:{lineno}: malformed line: {exc}") from exc
                self.insert_entry(entry)
                n += 1
        return n
