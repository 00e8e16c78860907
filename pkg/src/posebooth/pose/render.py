"""Deterministic stick-figure rasterization of pose skeletons."""

from __future__ import annotations

import io

from PIL import Image, ImageDraw

from .model import BONES, PoseSkeleton

# One stroke color per person, cycled. Order is part of the render contract.
PERSON_COLORS = (
    (230, 60, 60, 255),
    (60, 140, 230, 255),
    (60, 190, 90, 255),
    (235, 170, 40, 255),
    (170, 80, 220, 255),
    (50, 200, 200, 255),
)


def stroke_width(size: tuple[int, int]) -> int:
    return max(1, min(size) // 64)


def render_skeleton(skel: PoseSkeleton, size: tuple[int, int]) -> Image.Image:
    """Render the fixed bone list onto a transparent canvas.

    Bones touching any confidence==0 endpoint are omitted. Identical
    (skel, size) inputs produce byte-identical images.
    """
    w, h = size
    if w <= 0 or h <= 0:
        raise ValueError(f"image dimensions must be positive, got {size}")

    image = Image.new("RGBA", (w, h), (0, 0, 0, 0))
    draw = ImageDraw.Draw(image)
    width = stroke_width(size)

    for p_idx, person in enumerate(skel.persons):
        color = PERSON_COLORS[p_idx % len(PERSON_COLORS)]
        for a, b in BONES:
            ka, kb = person.joint(a), person.joint(b)
            if not (ka.visible and kb.visible):
                continue
            draw.line(
                [(ka.x * (w - 1), ka.y * (h - 1)), (kb.x * (w - 1), kb.y * (h - 1))],
                fill=color,
                width=width,
            )
    return image


def render_skeleton_png(skel: PoseSkeleton, size: tuple[int, int]) -> bytes:
    buf = io.BytesIO()
    render_skeleton(skel, size).save(buf, format="PNG")
    return buf.getvalue()
