"""Source-artwork catalog: manifest loading, validation, shuffling, style refs.

The manifest is a versioned JSON file with relative image paths. Dynamism
and subject counts are curator-entered; caption prompts are precomputed
offline so generation requests stay deterministic and captioner-free.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from PIL import Image, UnidentifiedImageError

from .pose.dynamism import DynamismRating

COLLECTIONS = ("finnish-golden-age", "wikiart")


class CatalogError(Exception):
    """Base class for catalog problems."""


class CatalogValidationError(CatalogError):
    """Manifest contents violate an invariant."""


class CatalogStorageError(CatalogError):
    """An image file could not be read at call time."""


@dataclass(frozen=True)
class ArtworkEntry:
    id: str
    title: str
    artist: str
    collection: str
    image_path: Path
    caption_prompt: str
    subject_count: int
    dynamism: DynamismRating
    safety_approved: bool


@dataclass(frozen=True)
class Catalog:
    entries: tuple[ArtworkEntry, ...]
    manifest_version: str

    @property
    def servable(self) -> tuple[ArtworkEntry, ...]:
        """Entries exposed to kiosks; curation keeps unsafe artworks out."""
        return tuple(e for e in self.entries if e.safety_approved)

    def get(self, artwork_id: str) -> ArtworkEntry:
        for entry in self.entries:
            if entry.id == artwork_id:
                return entry
        raise KeyError(artwork_id)


@dataclass(frozen=True)
class StyleRef:
    """Style-conditioning inputs for one generation: image bytes + caption."""

    artwork_id: str
    image: bytes
    caption: str


def load_catalog(manifest: Path | str) -> Catalog:
    manifest_path = Path(manifest)
    try:
        data = json.loads(manifest_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CatalogError(f"manifest not found: {manifest_path}") from None
    except json.JSONDecodeError as exc:
        raise CatalogValidationError(f"manifest is not valid JSON: {exc}") from exc

    if not isinstance(data, dict) or "entries" not in data:
        raise CatalogValidationError("manifest must be an object with an 'entries' list")

    base_dir = manifest_path.parent
    entries = []
    problems = []
    for i, raw in enumerate(data["entries"]):
        try:
            entries.append(_parse_entry(raw, base_dir))
        except (KeyError, ValueError, TypeError) as exc:
            problems.append(f"entries[{i}]: {exc}")

    if problems:
        raise CatalogValidationError("; ".join(problems))

    seen: dict[str, int] = {}
    for entry in entries:
        seen[entry.id] = seen.get(entry.id, 0) + 1
    duplicates = sorted(eid for eid, n in seen.items() if n > 1)
    if duplicates:
        raise CatalogValidationError(f"duplicate artwork ids: {', '.join(duplicates)}")

    for entry in entries:
        if not entry.image_path.is_file():
            problems.append(f"{entry.id}: image file missing: {entry.image_path}")
            continue
        try:
            with Image.open(entry.image_path) as img:
                img.verify()
        except (UnidentifiedImageError, OSError) as exc:
            problems.append(f"{entry.id}: image does not decode: {exc}")
    if problems:
        raise CatalogValidationError("; ".join(problems))

    catalog = Catalog(entries=tuple(entries), manifest_version=str(data.get("manifest_version", "0")))
    if not catalog.servable:
        raise CatalogError("catalog has zero servable entries; deployment cannot start")
    return catalog


def _parse_entry(raw: dict, base_dir: Path) -> ArtworkEntry:
    collection = raw["collection"]
    if collection not in COLLECTIONS:
        raise ValueError(f"unknown collection {collection!r}")
    caption = str(raw["caption_prompt"]).strip()
    if not caption:
        raise ValueError("caption_prompt must be non-empty")
    subject_count = int(raw["subject_count"])
    if subject_count < 0:
        raise ValueError("subject_count must be >= 0")
    return ArtworkEntry(
        id=str(raw["id"]),
        title=str(raw.get("title", "")),
        artist=str(raw.get("artist", "")),
        collection=collection,
        image_path=base_dir / raw["image_path"],
        caption_prompt=caption,
        subject_count=subject_count,
        dynamism=DynamismRating.from_label(str(raw["dynamism"])),
        safety_approved=bool(raw["safety_approved"]),
    )


def shuffled_view(catalog: Catalog, seed: int) -> list[str]:
    """Permutation of servable ids, a pure function of (catalog, seed).

    The session engine asks for a fresh seed after every completed
    generation, so each visitor starts from an unbiased ordering.
    """
    ids = [e.id for e in catalog.servable]
    if not ids:
        raise CatalogError("catalog has zero servable entries")
    random.Random(seed).shuffle(ids)
    return ids


def style_ref(entry: ArtworkEntry) -> StyleRef:
    """Load the style-conditioning descriptor: untransformed image bytes + caption."""
    try:
        image = entry.image_path.read_bytes()
    except OSError as exc:
        raise CatalogStorageError(f"cannot read image for {entry.id}: {exc}") from exc
    return StyleRef(artwork_id=entry.id, image=image, caption=entry.caption_prompt)


class Captioner(Protocol):
    """Offline caption regenerator (e.g. a CLIP-based interrogation service)."""

    def caption(self, image: bytes) -> str: ...


def recaption(catalog: Catalog, captioner: Captioner) -> list[dict]:
    """Regenerate caption prompts offline; returns manifest patch rows.

    Does not mutate the catalog: the operator reviews the patch and writes
    a new manifest version.
    """
    rows = []
    for entry in catalog.entries:
        new_caption = captioner.caption(entry.image_path.read_bytes()).strip()
        if new_caption and new_caption != entry.caption_prompt:
            rows.append({"id": entry.id, "caption_prompt": new_caption})
    return rows
