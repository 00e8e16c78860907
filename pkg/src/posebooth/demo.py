"""Demo deployment assets: placeholder artworks, wordlists, config.

The artwork images are generated locally (simple deterministic paintings)
so the repository carries no third-party image files; real deployments
swap in their own curated catalog manifest.
"""

from __future__ import annotations

import json
import secrets
from pathlib import Path

from PIL import Image, ImageDraw

DEMO_SIZE = (512, 640)

# Curated neutral nature words, Finnish and English mixed.
WORDS_A = (
    "aalto", "aurinko", "cloud", "forest", "harbor", "helmi", "hiekka", "honka",
    "island", "järvi", "kaisla", "kanerva", "kaste", "kesä", "lake", "lumi",
    "maple", "meadow", "metsä", "niitty", "pilvi", "river", "saari", "usva",
)
WORDS_B = (
    "birch", "ember", "halla", "heinä", "kallio", "kivi", "koivu", "kuura",
    "lähde", "lehti", "maja", "marja", "nummi", "oksa", "pine", "pouta",
    "ranta", "ruoho", "sammal", "stone", "tuuli", "vesi", "wave", "yötön",
)


def _vertical_gradient(size: tuple[int, int], top: tuple, bottom: tuple) -> Image.Image:
    w, h = size
    column = Image.new("RGB", (1, h))
    px = column.load()
    for y in range(h):
        f = y / (h - 1)
        px[0, y] = tuple(round(top[c] + (bottom[c] - top[c]) * f) for c in range(3))
    return column.resize(size, Image.NEAREST)


def _lake_at_dusk() -> Image.Image:
    img = _vertical_gradient(DEMO_SIZE, (240, 150, 90), (40, 40, 90))
    draw = ImageDraw.Draw(img)
    w, h = DEMO_SIZE
    draw.ellipse((w * 0.38, h * 0.22, w * 0.62, h * 0.41), fill=(255, 220, 150))
    draw.rectangle((0, h * 0.55, w, h), fill=(30, 45, 80))
    for i in range(6):
        y = h * (0.60 + 0.06 * i)
        draw.line((w * 0.1, y, w * 0.9, y), fill=(90, 110, 160), width=4)
    return img


def _winter_forest() -> Image.Image:
    img = _vertical_gradient(DEMO_SIZE, (210, 220, 235), (245, 245, 250))
    draw = ImageDraw.Draw(img)
    w, h = DEMO_SIZE
    for i, x_frac in enumerate((0.15, 0.32, 0.5, 0.68, 0.85)):
        x = w * x_frac
        trunk_w = 10 + 4 * (i % 3)
        draw.rectangle((x - trunk_w / 2, h * 0.25, x + trunk_w / 2, h * 0.9), fill=(70, 55, 50))
        for level in range(3):
            top = h * (0.2 + 0.12 * level)
            spread = w * (0.05 + 0.02 * level)
            draw.polygon(
                [(x, top), (x - spread, top + h * 0.12), (x + spread, top + h * 0.12)],
                fill=(40, 90, 70),
            )
    return img


def _dancers_in_field() -> Image.Image:
    img = _vertical_gradient(DEMO_SIZE, (150, 200, 240), (230, 210, 120))
    draw = ImageDraw.Draw(img)
    w, h = DEMO_SIZE
    draw.rectangle((0, h * 0.62, w, h), fill=(200, 170, 70))
    for x_frac in (0.3, 0.55, 0.75):
        cx, cy = w * x_frac, h * 0.5
        draw.ellipse((cx - 14, cy - 70, cx + 14, cy - 42), fill=(190, 120, 100))
        draw.line((cx, cy - 42, cx, cy + 30), fill=(120, 60, 60), width=10)
        draw.line((cx - 36, cy - 40, cx + 36, cy - 15), fill=(120, 60, 60), width=8)
        draw.line((cx - 26, cy + 80, cx, cy + 30), fill=(120, 60, 60), width=8)
        draw.line((cx + 26, cy + 80, cx, cy + 30), fill=(120, 60, 60), width=8)
    return img


def _harbor_wave() -> Image.Image:
    img = _vertical_gradient(DEMO_SIZE, (235, 240, 245), (50, 90, 140))
    draw = ImageDraw.Draw(img)
    w, h = DEMO_SIZE
    for i in range(5):
        y0 = h * (0.35 + 0.11 * i)
        draw.arc((w * -0.3, y0, w * 0.9, y0 + h * 0.3), start=200, end=340,
                 fill=(240, 245, 250), width=14)
        draw.arc((w * 0.2, y0 + h * 0.05, w * 1.3, y0 + h * 0.35), start=200, end=340,
                 fill=(90, 140, 190), width=14)
    draw.polygon([(w * 0.7, h * 0.82), (w * 0.9, h * 0.82), (w * 0.8, h * 0.68)],
                 fill=(140, 90, 60))
    return img


DEMO_ARTWORKS = (
    {
        "id": "fga-lake-dusk",
        "title": "Lake at Dusk",
        "artist": "Demo Painter A",
        "collection": "finnish-golden-age",
        "caption_prompt": "a tranquil lakeshore at dusk with a low golden sun, oil painting",
        "subject_count": 0,
        "dynamism": "low",
        "painter": _lake_at_dusk,
    },
    {
        "id": "fga-winter-forest",
        "title": "Winter Forest",
        "artist": "Demo Painter A",
        "collection": "finnish-golden-age",
        "caption_prompt": "a quiet snowy spruce forest in pale winter light, oil painting",
        "subject_count": 0,
        "dynamism": "low",
        "painter": _winter_forest,
    },
    {
        "id": "wa-dancers-field",
        "title": "Dancers in a Field",
        "artist": "Demo Painter B",
        "collection": "wikiart",
        "caption_prompt": "three figures dancing in a golden field under a summer sky, post-impressionist painting",
        "subject_count": 3,
        "dynamism": "high",
        "painter": _dancers_in_field,
    },
    {
        "id": "wa-harbor-wave",
        "title": "The Harbor Wave",
        "artist": "Demo Painter B",
        "collection": "wikiart",
        "caption_prompt": "a cresting wave rolling toward a small boat near the harbor, woodblock print style",
        "subject_count": 1,
        "dynamism": "medium",
        "painter": _harbor_wave,
    },
)


def write_demo_catalog(dest: Path) -> Path:
    """Create images plus manifest.json under dest; returns the manifest path."""
    images_dir = dest / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for spec_row in DEMO_ARTWORKS:
        filename = f"{spec_row['id']}.png"
        spec_row["painter"]().save(images_dir / filename, format="PNG")
        entries.append(
            {
                "id": spec_row["id"],
                "title": spec_row["title"],
                "artist": spec_row["artist"],
                "collection": spec_row["collection"],
                "image_path": f"images/{filename}",
                "caption_prompt": spec_row["caption_prompt"],
                "subject_count": spec_row["subject_count"],
                "dynamism": spec_row["dynamism"],
                "safety_approved": True,
            }
        )
    manifest = {"manifest_version": "demo-1", "entries": entries}
    manifest_path = dest / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return manifest_path


def write_wordlists(dest: Path) -> tuple[Path, Path]:
    dest.mkdir(parents=True, exist_ok=True)
    path_a, path_b = dest / "words-a.txt", dest / "words-b.txt"
    path_a.write_text("\n".join(WORDS_A) + "\n", encoding="utf-8")
    path_b.write_text("\n".join(WORDS_B) + "\n", encoding="utf-8")
    return path_a, path_b


def init_demo_deployment(dest: Path | str, stations: int = 2) -> Path:
    """Lay out a runnable deployment directory; returns the config path."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    manifest = write_demo_catalog(dest / "catalog")
    words_a, words_b = write_wordlists(dest / "wordlists")
    (dest / "store").mkdir(exist_ok=True)

    station_map = {}
    for i in range(stations):
        booth = "public" if i % 2 == 0 else "private"
        station_map[f"station-{i + 1}"] = booth

    config = {
        "listen_host": "127.0.0.1",
        "listen_port": 8000,
        "webhook_secret": secrets.token_hex(16),
        "long_poll_timeout": 25,
        "backend_url": None,
        "inline_results": False,
        "stations": station_map,
        "catalog_manifest": str(manifest.relative_to(dest)),
        "wordlist_a": str(words_a.relative_to(dest)),
        "wordlist_b": str(words_b.relative_to(dest)),
        "store_dir": "store",
    }
    config_path = dest / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path
