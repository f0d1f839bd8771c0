"""Command-line surface: crawl, search, export, import, serve."""

import json
import sys
from pathlib import Path

import click

from .crawler import DEFAULT_USER_AGENT, CrawlConfig, crawl as run_crawl
from .imaging import ImageDecodeError
from .ontology import ProfileError, load_domain_profile, load_profiles_dir
from .repository import Repository, RepositoryError
from .search import Query, SearchError, execute_search

_db_option = click.option(
    "--db",
    "db_path",
    envvar="HISTOSEEK_DB",
    required=True,
    help="Repository database path (env: HISTOSEEK_DB).",
)


def _require_db_file(db_path: str) -> None:
    """Read-only commands must not create an empty database as a side effect."""
    if not Path(db_path).exists():
        raise click.UsageError(f"database not found: {db_path}")


@click.group()
def cli():
    """Domain-specific image search: crawl, index, and query by image."""


@cli.command("crawl")
@click.option("--profile", "profile_path", required=True, help="Domain profile JSON.")
@click.option("--seeds", "seeds_path", required=True, help="Seed URLs, one per line.")
@_db_option
@click.option("--max-pages", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--max-depth", type=click.IntRange(min=0), default=3, show_default=True)
@click.option("--delay", type=click.FloatRange(min=0), default=0.1, show_default=True,
              help="Minimum seconds between requests to one host.")
@click.option("--same-host/--any-host", default=True, show_default=True,
              help="Restrict links to the seed hosts.")
@click.option("--respect-robots/--ignore-robots", default=True, show_default=True)
@click.option("--user-agent", default=DEFAULT_USER_AGENT, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Fetch workers; 1 is deterministic.")
def cli_crawl(profile_path, seeds_path, db_path, max_pages, max_depth, delay,
              same_host, respect_robots, user_agent, workers):
    """Crawl from seed URLs and index images of relevant pages."""
    try:
        profile = load_domain_profile(profile_path)
    except ProfileError as exc:
        raise click.UsageError(str(exc))
    try:
        lines = Path(seeds_path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise click.UsageError(f"cannot read seeds file: {exc}")
    seeds = tuple(line.strip() for line in lines if line.strip())
    if not seeds:
        raise click.UsageError(f"no seed URLs in {seeds_path}")
    config = CrawlConfig(
        seeds=seeds,
        max_pages=max_pages,
        max_depth=max_depth,
        per_host_delay=delay,
        same_host_only=same_host,
        user_agent=user_agent,
        respect_robots=respect_robots,
        workers=workers,
    )
    with Repository(db_path) as repo:
        report = run_crawl(config, profile, repo)
    click.echo(json.dumps(report.to_dict(), indent=2))


@cli.command("search")
@_db_option
@click.option("--image", "image_ref", required=True,
              help="Query image: a local file path or an http(s) URL.")
@click.option("--mode", type=click.Choice(["exact", "probable"]), default="probable",
              show_default=True)
@click.option("--tolerance", type=click.IntRange(0, 100), default=0, show_default=True)
@click.option("--domain", required=True)
@click.option("--relevance-range", "rel_range", type=float, nargs=2, default=None,
              help="Inclusive relevance filter MIN MAX; defaults to the domain bounds.")
@click.option("--profiles-dir", default=None, help="Directory of domain profile JSONs.")
def cli_search(db_path, image_ref, mode, tolerance, domain, rel_range, profiles_dir):
    """Query the repository by image; prints one JSON result per line."""
    _require_db_file(db_path)
    if mode == "exact" and tolerance != 0:
        raise click.UsageError("exact mode requires tolerance 0")
    if image_ref.startswith(("http://", "https://")):
        ref: str | bytes = image_ref
    else:
        try:
            ref = Path(image_ref).read_bytes()
        except OSError as exc:
            raise click.UsageError(f"cannot read image file: {exc}")
    try:
        profiles = load_profiles_dir(profiles_dir) if profiles_dir else None
        query = Query(
            image_ref=ref,
            domain=domain,
            mode=mode,
            tolerance=tolerance,
            rel_range=tuple(rel_range) if rel_range else None,
        )
        with Repository(db_path) as repo:
            results = execute_search(query, repo, profiles)
    except (SearchError, ProfileError, ImageDecodeError, RepositoryError) as exc:
        raise click.UsageError(str(exc))
    for r in results:
        click.echo(
            json.dumps(
                {
                    "rank": r.rank,
                    "similarity": r.similarity,
                    "gap": r.gap,
                    "id": r.entry.id,
                    "image_url": r.entry.image_url,
                    "page_url": r.entry.page_url,
                    "domain": r.entry.domain,
                    "relevance": r.entry.relevance,
                    "indexed_at": r.entry.indexed_at,
                }
            )
        )


@cli.command("export")
@_db_option
@click.argument("output", type=click.Path(dir_okay=False, writable=True))
def cli_export(db_path, output):
    """Export the repository as JSON Lines."""
    _require_db_file(db_path)
    try:
        with Repository(db_path) as repo:
            n = repo.export_jsonl(output)
    except RepositoryError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"exported {n} entries to {output}", err=True)


@cli.command("import")
@_db_option
@click.argument("input", type=click.Path(exists=True, dir_okay=False))
def cli_import(db_path, input):
    """Import (upsert) entries from a JSON Lines file."""
    try:
        with Repository(db_path) as repo:
            n = repo.import_jsonl(input)
    except RepositoryError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"imported {n} entries from {input}", err=True)


@cli.command("serve")
@_db_option
@click.option("--profiles-dir", default=None)
@click.option("--port", type=click.IntRange(1, 65535), default=8033, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static-ui-dir", default=None, help="Serve these static files at /.")
@click.option("--max-upload-bytes", type=click.IntRange(min=1), default=16 * 1024 * 1024,
              show_default=True)
def cli_serve(db_path, profiles_dir, port, host, static_ui_dir, max_upload_bytes):
    """Run the HTTP API (and optionally the web UI)."""
    import uvicorn

    from .service import ServiceConfig, create_app

    try:
        config = ServiceConfig(
            db_path=db_path,
            profiles_dir=profiles_dir,
            static_ui_dir=static_ui_dir,
            max_upload_bytes=max_upload_bytes,
            port=port,
        )
    except (FileNotFoundError, ValueError) as exc:
        raise click.UsageError(str(exc))
    uvicorn.run(create_app(config), host=host, port=port)


def main():  # pragma: no cover
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
