"""Build the bundled glyph atlas (src/captchalab/data/atlas.gaf).

Rasterizes A-Z and a-z from two DejaVu faces (bold upright = font 0,
bold oblique = font 1) onto a 12x16 cell grid, then applies hand edits
for letter pairs that would collapse to the same bitmap across classes
(most importantly bare-bar 'I' vs 'l'). Run from the repo root:

    python3 tools/make_atlas.py
"""

from __future__ import annotations

import os
import sys

import numpy as np
from PIL import Image, ImageDraw, ImageFont
import matplotlib.font_manager as fm

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from captchalab.glyphs import GLYPH_HEIGHT, GLYPH_WIDTH, LETTERS  # noqa: E402

FONT_DIR = os.path.join(os.path.dirname(fm.__file__), "mpl-data", "fonts", "ttf")
FACES = {
    0: os.path.join(FONT_DIR, "DejaVuSans-Bold.ttf"),
    1: os.path.join(FONT_DIR, "DejaVuSans-BoldOblique.ttf"),
}
RENDER_PT = 96
COVERAGE = 0.35  # cell becomes ink when at least this fraction is covered

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "captchalab", "data", "atlas.gaf")


def rasterize(char: str, face_path: str) -> np.ndarray:
    font = ImageFont.truetype(face_path, RENDER_PT)
    img = Image.new("L", (3 * RENDER_PT, 3 * RENDER_PT), 0)
    draw = ImageDraw.Draw(img)
    draw.text((RENDER_PT // 2, RENDER_PT // 2), char, fill=255, font=font)
    arr = np.asarray(img) > 127
    ys, xs = np.nonzero(arr)
    if len(ys) == 0:
        raise RuntimeError(f"glyph {char!r} rendered empty")
    arr = arr[ys.min():ys.max() + 1, xs.min():xs.max() + 1]
    h, w = arr.shape
    cells = np.zeros((GLYPH_HEIGHT, GLYPH_WIDTH), dtype=bool)
    for gy in range(GLYPH_HEIGHT):
        y0 = gy * h // GLYPH_HEIGHT
        y1 = max(y0 + 1, (gy + 1) * h // GLYPH_HEIGHT)
        for gx in range(GLYPH_WIDTH):
            x0 = gx * w // GLYPH_WIDTH
            x1 = max(x0 + 1, (gx + 1) * w // GLYPH_WIDTH)
            cells[gy, gx] = arr[y0:y1, x0:x1].mean() >= COVERAGE
    return cells


def from_art(art: str) -> np.ndarray:
    rows = [line for line in art.strip().splitlines()]
    assert len(rows) == GLYPH_HEIGHT, f"need {GLYPH_HEIGHT} rows, got {len(rows)}"
    assert all(len(r) == GLYPH_WIDTH for r in rows)
    return np.array([[c == "#" for c in row] for row in rows])


# Hand edits. DejaVu's 'I' and 'l' are both bare vertical bars; once each
# glyph is stretched to the full cell box they become indistinguishable
# across *different* classes, so both get distinctive treatments: serif
# bars for 'I', a curled foot for 'l'. 'K' gets wide-open notches: the
# DejaVu bold form fills in under a 3x3 median and then reads as 'R'.
HAND_EDITS = {
    ("K", 0): from_art("""
###......###
###.....###.
###....###..
###...###...
###..###....
###.###.....
######......
#####.......
#####.......
######......
###.###.....
###..###....
###...###...
###....###..
###.....###.
###......###
"""),
    ("K", 1): from_art("""
..###....###
..###...###.
..###..###..
..###.###...
..######....
..#####.....
.#####......
.#####......
.#####......
.######.....
.###.###....
.###..###...
###....###..
###.....###.
###......###
###......###
"""),
    ("I", 0): from_art("""
############
############
....####....
....####....
....####....
....####....
....####....
....####....
....####....
....####....
....####....
....####....
....####....
....####....
############
############
"""),
    ("I", 1): from_art("""
.###########
.###########
......####..
......####..
.....####...
.....####...
.....####...
....####....
....####....
...####.....
...####.....
...####.....
..####......
..####......
###########.
###########.
"""),
    ("l", 0): from_art("""
.#####......
.#####......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...###......
...#######..
....######..
"""),
    ("l", 1): from_art("""
...#####....
...#####....
.....###....
.....###....
.....###....
....###.....
....###.....
....###.....
....###.....
...###......
...###......
...###......
...###......
..###.......
..#######...
..######....
"""),
}


def main():
    lines = ["# Bundled bitmap glyph atlas: 12x16 cells, fonts 0 (blocky) and 1 (slanted)."]
    for font_id, face in FACES.items():
        for ch in LETTERS + LETTERS.lower():
            key = (ch, font_id)
            cells = HAND_EDITS[key] if key in HAND_EDITS else rasterize(ch, face)
            lines.append("")
            lines.append(f"glyph {ch} {font_id}")
            for row in cells:
                lines.append("".join("#" if c else "." for c in row))
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {OUT}: {len(FACES) * 52} glyphs")


if __name__ == "__main__":
    main()
