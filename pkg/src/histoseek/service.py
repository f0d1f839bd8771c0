"""HTTP API binding the repository and search engine together.

Endpoints:

* ``GET /api/domains`` -> ``[{"name", "rel_min", "rel_max"}]`` for every
  domain holding entries.
* ``POST /api/search`` -> ranked results; the query image arrives as a
  URL (fetched server-side) or base64 bytes.  Validation problems come
  back as ``422 {"error": {"field", "message"}}``.
* ``GET /api/thumb/{id}`` -> cached image bytes, 404 when uncached.

When a static UI directory is configured its files are served from the
root path.  The service only reads the repository; crawling happens in a
separate process.
"""

import base64
import binascii
from dataclasses import dataclass
from pathlib import Path

import requests
from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from typing import Literal

from .ontology import DomainProfile, load_profiles_dir
from .repository import Repository
from .search import Query, SearchError, execute_search

__all__ = ["ServiceConfig", "create_app"]

DEFAULT_MAX_UPLOAD = 16 * 1024 * 1024


@dataclass(frozen=True)
class ServiceConfig:
    db_path: str
    profiles_dir: str | None = None
    static_ui_dir: str | None = None
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    port: int = 8033

    def __post_init__(self) -> None:
        if not 0 < self.port < 65536:
            raise ValueError(f"invalid port {self.port}")
        if self.max_upload_bytes < 1:
            raise ValueError("max_upload_bytes must be positive")
        if not Path(self.db_path).exists():
            raise FileNotFoundError(f"repository not found: {self.db_path}")
        if self.profiles_dir is not None and not Path(self.profiles_dir).is_dir():
            raise FileNotFoundError(f"profiles dir not found: {self.profiles_dir}")
        if self.static_ui_dir is not None and not Path(self.static_ui_dir).is_dir():
            raise FileNotFoundError(f"static UI dir not found: {self.static_ui_dir}")


class _FieldError(Exception):
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class SearchRequest(BaseModel):
    image_url: str | None = None
    image_b64: str | None = None
    mode: Literal["exact", "probable"]
    tolerance: int = 0
    domain: str
    relevance_range: tuple[float, float] | None = None


def _error_response(field: str, message: str, status: int = 422) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"field": field, "message": message}}
    )


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="histoseek", docs_url=None, redoc_url=None)
    profiles: dict[str, DomainProfile] = (
        load_profiles_dir(config.profiles_dir) if config.profiles_dir else {}
    )

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = [str(part) for part in first.get("loc", ()) if part != "body"]
        return _error_response(".".join(loc) or "body", first.get("msg", "invalid"))

    @app.exception_handler(_FieldError)
    async def on_field_error(request: Request, exc: _FieldError):
        return _error_response(exc.field, exc.message)

    def _open_repo() -> Repository:
        return Repository(config.db_path)

    def _query_bytes(req: SearchRequest) -> bytes:
        if (req.image_url is None) == (req.image_b64 is None):
            raise _FieldError("image_url", "exactly one of image_url or image_b64 required")
        if req.image_b64 is not None:
            try:
                data = base64.b64decode(req.image_b64, validate=True)
            except (binascii.Error, ValueError):
                raise _FieldError("image_b64", "invalid base64") from None
            if len(data) > config.max_upload_bytes:
                raise _FieldError("image_b64", "image exceeds upload limit")
            return data
        try:
            resp = requests.get(req.image_url, timeout=30)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise _FieldError("image_url", f"cannot fetch image: {exc}") from None
        if len(resp.content) > config.max_upload_bytes:
            raise _FieldError("image_url", "image exceeds upload limit")
        return resp.content

    @app.get("/api/domains")
    def domains():
        with _open_repo() as repo:
            return [
                {
                    "name": bounds.domain,
                    "rel_min": bounds.rel_min,
                    "rel_max": bounds.rel_max,
                }
                for bounds in (
                    repo.domain_relevance_bounds(d) for d in repo.domains()
                )
            ]

    @app.post("/api/search")
    def search(req: SearchRequest):
        data = _query_bytes(req)
        try:
            query = Query(
                image_ref=data,
                domain=req.domain,
                mode=req.mode,
                tolerance=req.tolerance,
                rel_range=req.relevance_range,
            )
        except SearchError as exc:
            raise _FieldError("tolerance" if "tolerance" in str(exc) else "relevance_range", str(exc)) from None
        with _open_repo() as repo:
            try:
                results = execute_search(query, repo, profiles)
            except SearchError as exc:
                field = "domain" if "domain" in str(exc) else "image"
                raise _FieldError(field, str(exc)) from None
        return {
            "results": [
                {
                    "id": r.entry.id,
                    "image_url": r.entry.image_url,
                    "page_url": r.entry.page_url,
                    "relevance": r.entry.relevance,
                    "similarity": r.similarity,
                    "rank": r.rank,
                }
                for r in results
            ]
        }

    @app.get("/api/thumb/{entry_id}")
    def thumb(entry_id: str):
        with _open_repo() as repo:
            cached = repo.get_thumb(entry_id)
        if cached is None:
            return _error_response("id", "no cached image for entry", status=404)
        data, content_type = cached
        return Response(content=data, media_type=content_type or "application/octet-stream")

    if config.static_ui_dir:
        app.mount("/", StaticFiles(directory=config.static_ui_dir, html=True), name="ui")

    return app
