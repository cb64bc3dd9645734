"""Bitmap glyph atlas: loading, validation, and text rendering.

An atlas holds 12x16 bitmaps for A-Z and a-z in two fonts (104 glyphs).
The same atlas drives both challenge rendering and classifier training.

Atlas file format (GAF), plain text:

    glyph <char> <font_id>
    ................    <- 16 rows of exactly 12 cells, '#' = ink
    ...

Blank lines are skipped anywhere. Lines starting with '#' are comments
only *between* glyph blocks; the 16 rows following a header are always
bitmap rows, so rows whose first cell is ink parse unambiguously.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import AtlasError, RenderError
from .imgcore import BinaryImage, RasterImage, blit_bitmap

GLYPH_WIDTH = 12
GLYPH_HEIGHT = 16
LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
FONT_IDS = (0, 1)


@dataclass(frozen=True)
class Glyph:
    codepoint: str
    font_id: int
    bitmap: BinaryImage


class GlyphAtlas:
    """Immutable collection of glyphs keyed by (character, font_id)."""

    def __init__(self, glyphs: dict[tuple[str, int], Glyph]):
        self._glyphs = dict(glyphs)

    def __len__(self) -> int:
        return len(self._glyphs)

    def __contains__(self, key: tuple[str, int]) -> bool:
        return key in self._glyphs

    def get(self, char: str, font_id: int) -> Glyph:
        try:
            return self._glyphs[(char, font_id)]
        except KeyError:
            raise RenderError(f"no glyph for {char!r} in font {font_id}") from None

    def items(self):
        return self._glyphs.items()


def parse_atlas(text: str) -> GlyphAtlas:
    """Parse GAF text into a validated atlas."""
    glyphs: dict[tuple[str, int], Glyph] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "glyph" or len(parts) != 3:
            raise AtlasError(f"line {i}: expected 'glyph <char> <font_id>', got {line!r}")
        char = parts[1]
        if len(char) != 1:
            raise AtlasError(f"line {i}: glyph name must be one character, got {char!r}")
        try:
            font_id = int(parts[2])
        except ValueError:
            raise AtlasError(f"line {i}: bad font id {parts[2]!r}") from None
        if font_id not in FONT_IDS:
            raise AtlasError(f"line {i}: font id must be 0 or 1, got {font_id}")
        rows = []
        while len(rows) < GLYPH_HEIGHT and i < len(lines):
            row = lines[i].strip()
            i += 1
            if not row:
                continue
            if len(row) != GLYPH_WIDTH or set(row) - {".", "#"}:
                raise AtlasError(
                    f"line {i}: glyph {char}/{font_id} row must be {GLYPH_WIDTH} cells "
                    f"of '.' or '#', got {row!r}")
            rows.append([c == "#" for c in row])
        if len(rows) != GLYPH_HEIGHT:
            raise AtlasError(f"glyph {char}/{font_id}: expected {GLYPH_HEIGHT} rows")
        key = (char, font_id)
        if key in glyphs:
            raise AtlasError(f"duplicate glyph {char}/{font_id}")
        bitmap = BinaryImage(np.array(rows, dtype=bool))
        if bitmap.ink_count == 0:
            raise AtlasError(f"glyph {char}/{font_id} has no ink")
        glyphs[key] = Glyph(char, font_id, bitmap)

    for font_id in FONT_IDS:
        for ch in LETTERS + LETTERS.lower():
            if (ch, font_id) not in glyphs:
                raise AtlasError(f"missing {ch}/{font_id}")
    return GlyphAtlas(glyphs)


def load_atlas(data: bytes) -> GlyphAtlas:
    return parse_atlas(data.decode("utf-8"))


def default_atlas() -> GlyphAtlas:
    """The atlas bundled with the package (two fonts: blocky and slanted)."""
    data = resources.files("captchalab.data").joinpath("atlas.gaf").read_bytes()
    return load_atlas(data)


def render_text(atlas: GlyphAtlas, text: str, font_id: int, at: tuple[int, int],
                spacing: int, scale: int, intensity: int,
                canvas: RasterImage) -> RasterImage:
    """Blit each character of text onto the canvas, advancing x by `spacing`.

    All characters must exist in the atlas and every scaled glyph must fit
    inside the canvas.
    """
    x, y = at
    img = canvas
    for idx, ch in enumerate(text):
        glyph = atlas.get(ch, font_id)
        try:
            img = blit_bitmap(img, glyph.bitmap, (x + idx * spacing, y), intensity, scale)
        except Exception as exc:
            raise RenderError(f"cannot place {ch!r} at index {idx}: {exc}") from exc
    return img
