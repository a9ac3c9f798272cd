"""Colorized-image rendering: paint each word's color over its region.

Every pixel outside the painted word regions stays bit-identical to the
input, so the output is a lossless copy of the document apart from the
word masks.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from wordvis.backend import get_backend
from wordvis.errors import RenderError
from wordvis.ocr import BoundingBox, DocumentOcr
from wordvis.scoring import ScoreTable, normalize_token, word_color


class FillMode(enum.Enum):
    SOLID_BOX = "solid"
    GLYPH_MASK = "glyph"


@dataclass(frozen=True)
class RenderConfig:
    """How word regions are painted.

    alpha blends the word color over the original pixels (1 = opaque);
    glyph_threshold is the luminance below which a pixel counts as ink in
    GLYPH_MASK mode; words with a confidence below min_confidence are left
    unrendered (words without a confidence always render).
    """

    fill_mode: FillMode = FillMode.SOLID_BOX
    alpha: float = 1.0
    glyph_threshold: int = 128
    min_confidence: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")
        if not 0 <= self.glyph_threshold <= 255:
            raise ValueError(f"glyph_threshold {self.glyph_threshold} outside [0, 255]")
        if not 0.0 <= self.min_confidence <= 100.0:
            raise ValueError(f"min_confidence {self.min_confidence} outside [0, 100]")


@dataclass
class RenderReport:
    painted: int = 0
    skipped_low_confidence: int = 0
    skipped_zero_extent: int = 0
    clipped: int = 0
    backend: str = ""

    @property
    def skipped(self) -> int:
        return self.skipped_low_confidence + self.skipped_zero_extent


class RasterImage:
    """RGB 8-bit raster backed by a (height, width, 3) uint8 array."""

    def __init__(self, pixels: np.ndarray):
        pixels = np.ascontiguousarray(pixels)
        if pixels.dtype != np.uint8 or pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) uint8 pixels, got {pixels.dtype} {pixels.shape}")
        self.pixels = pixels

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @classmethod
    def filled(cls, width: int, height: int, color=(255, 255, 255)) -> "RasterImage":
        pixels = np.empty((height, width, 3), dtype=np.uint8)
        pixels[:, :] = color
        return cls(pixels)

    @classmethod
    def from_pil(cls, image: Image.Image) -> "RasterImage":
        # Grayscale and paletted inputs are promoted to RGB.
        return cls(np.asarray(image.convert("RGB"), dtype=np.uint8))

    @classmethod
    def load(cls, path: str | Path) -> "RasterImage":
        with Image.open(path) as image:
            return cls.from_pil(image)

    def to_pil(self) -> Image.Image:
        return Image.fromarray(self.pixels, mode="RGB")

    def encode(self, format: str = "PNG") -> bytes:
        buffer = io.BytesIO()
        self.to_pil().save(buffer, format=format)
        return buffer.getvalue()

    def save(self, path: str | Path) -> None:
        self.to_pil().save(path)

    def copy(self) -> "RasterImage":
        return RasterImage(self.pixels.copy())


def clip_box(box: BoundingBox, width: int, height: int) -> BoundingBox:
    """Intersect box with [0, width) x [0, height); empty becomes zero-extent."""
    x0 = min(max(box.left, 0), width)
    y0 = min(max(box.top, 0), height)
    x1 = min(max(box.left + box.width, 0), width)
    y1 = min(max(box.top + box.height, 0), height)
    return BoundingBox(left=x0, top=y0, width=max(0, x1 - x0), height=max(0, y1 - y0))


def luminance(r: int, g: int, b: int) -> int:
    """Integer Rec.601 luma, rounded half up."""
    for value in (r, g, b):
        if not 0 <= value <= 255:
            raise ValueError(f"channel value {value} outside [0, 255]")
    return int(math.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5))


def colorize(
    image: RasterImage,
    doc: DocumentOcr,
    table: ScoreTable,
    config: RenderConfig = RenderConfig(),
    *,
    backend: str | None = None,
) -> tuple[RasterImage, RenderReport]:
    """Paint each word's color over its bounding box region.

    Words paint in reading order, so later words overwrite overlaps. Boxes
    are clipped to the image frame; a box that clips to nothing is counted
    skipped, not an error. The input image is not modified.
    """
    if image.width == 0 or image.height == 0:
        raise RenderError(f"cannot render into a {image.width}x{image.height} image")

    kernels = get_backend(backend)
    out = image.pixels.copy()
    report = RenderReport(backend=kernels.BACKEND_NAME)

    for word in doc.words:
        if word.confidence is not None and word.confidence < config.min_confidence:
            report.skipped_low_confidence += 1
            continue
        clipped = clip_box(word.box, image.width, image.height)
        if clipped.is_empty():
            report.skipped_zero_extent += 1
            continue
        if clipped != word.box:
            report.clipped += 1
        color = word_color(table, normalize_token(word.text)).color
        x0, y0 = clipped.left, clipped.top
        x1, y1 = x0 + clipped.width, y0 + clipped.height
        if config.fill_mode is FillMode.SOLID_BOX:
            kernels.paint_solid(out, x0, y0, x1, y1, color.r, color.g, color.b, config.alpha)
        else:
            kernels.paint_glyph(
                out, x0, y0, x1, y1, color.r, color.g, color.b,
                config.alpha, config.glyph_threshold,
            )
        report.painted += 1

    return RasterImage(out), report
