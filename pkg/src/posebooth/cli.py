"""Command-line entry points: serve the installation, drive it, analyze data."""

from __future__ import annotations

import io
import json
import time
from pathlib import Path

import click
import httpx
from PIL import Image


@click.group()
def main() -> None:
    """Body-prompting installation server and analysis toolkit."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", default=None, type=int, help="Override the configured listen port.")
def serve(config_path: str, host: str | None, port: int | None) -> None:
    """Run the HTTP service for kiosks, viewers, and the generation webhook."""
    import uvicorn

    from .api.app import create_app
    from .api.config import ApiConfig

    config = ApiConfig.from_file(config_path)
    app = create_app(config)
    uvicorn.run(app, host=host or config.listen_host, port=port or config.listen_port)


@main.command("init-demo")
@click.option("--dest", required=True, type=click.Path(file_okay=False))
@click.option("--stations", default=2, show_default=True)
def init_demo(dest: str, stations: int) -> None:
    """Create a runnable demo deployment (catalog, wordlists, config)."""
    from .demo import init_demo_deployment

    config_path = init_demo_deployment(Path(dest), stations=stations)
    click.echo(f"demo deployment ready: {config_path}")
    click.echo(f"start it with: posebooth serve --config {config_path}")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--permutation-p", is_flag=True, help="Add a 10,000-resample permutation p-value.")
@click.option("--seed", default=0, show_default=True, help="Seed for the permutation resampler.")
@click.option("--ratings", "ratings_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Optional rater-level CSV (subject,rater,variable,category) for agreement stats.")
def analyze(records_path: str, out_path: str, permutation_p: bool, seed: int,
            ratings_path: str | None) -> None:
    """Tabulate session records and compute correlation/agreement statistics."""
    from .analysis.records import load_records
    from .analysis.report import build_report

    records = load_records(records_path)
    report = build_report(
        records,
        permutations=10_000 if permutation_p else None,
        seed=seed,
        ratings_path=ratings_path,
    )
    Path(out_path).write_text(json.dumps(report, indent=2), encoding="utf-8")
    click.echo(f"analyzed {len(records)} records -> {out_path}")


def _fake_capture(width: int = 320, height: int = 240) -> bytes:
    image = Image.new("RGB", (width, height), (128, 128, 128))
    buf = io.BytesIO()
    image.save(buf, format="JPEG")
    return buf.getvalue()


@main.command()
@click.option("--base-url", default="http://127.0.0.1:8000", show_default=True)
@click.option("--station", default="station-1", show_default=True)
@click.option("--artwork", default=None, help="Artwork id; first gallery entry if omitted.")
def walk(base_url: str, station: str, artwork: str | None) -> None:
    """Scripted kiosk walk against a running server: consent, select, capture."""
    client = httpx.Client(base_url=base_url, timeout=30.0)

    status = client.post(f"/station/{station}/consent").raise_for_status().json()
    click.echo(f"phase: {status['phase']}")

    gallery = client.get(f"/station/{station}/catalog").raise_for_status().json()
    chosen = artwork or gallery["entries"][0]["id"]
    client.post(f"/station/{station}/select", json={"artwork_id": chosen}).raise_for_status()
    click.echo(f"selected: {chosen}")

    client.post(f"/station/{station}/start").raise_for_status()
    while True:
        status = client.get(f"/station/{station}/status").raise_for_status().json()
        if status["phase"] == "capturing":
            break
        remaining = status.get("seconds_remaining")
        click.echo(f"countdown: {remaining}s")
        time.sleep(1.0)

    response = client.post(
        f"/station/{station}/capture",
        content=_fake_capture(),
        headers={"Content-Type": "application/octet-stream"},
    ).raise_for_status().json()
    click.echo(f"pickup code: {response['code']}")


if __name__ == "__main__":
    main()
