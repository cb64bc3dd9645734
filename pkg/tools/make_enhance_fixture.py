"""Build the bundled degraded-print fixture (data/degraded_text.pgm).

Four glyphs ("HLTE", so G = 4) rendered at scale 4, strokes broken by two
white 2-px slits, then 10% dark speckle. Plain thresholding of this image
yields thousands of raw components; the max/median/mean + Otsu chain
removes the speckle and recovers the glyph pieces.

    python3 tools/make_enhance_fixture.py
"""

from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from captchalab.glyphs import default_atlas, render_text  # noqa: E402
from captchalab.imgcore import RasterImage, Rng, pgm_encode  # noqa: E402

TEXT = "HLTE"
SCALE = 4
CUT_ROWS = (34, 52)
CUT_HEIGHT = 2
SPECKLE = 0.10
SEED = 5

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "captchalab", "data",
                   "degraded_text.pgm")


def main():
    w = 20 * SCALE * len(TEXT) + 60
    h = 16 * SCALE + 40
    img = render_text(default_atlas(), TEXT, 0, (20, 20), 20 * SCALE, SCALE, 0,
                      RasterImage.blank(w, h))
    px = img.pixels.copy()
    for y in CUT_ROWS:
        px[y:y + CUT_HEIGHT, :] = 255
    rng = Rng(SEED)
    for yy in range(h):
        for xx in range(w):
            if rng.next_float() < SPECKLE:
                px[yy, xx] = 0
    with open(OUT, "wb") as fh:
        fh.write(pgm_encode(RasterImage(px)))
    print(f"wrote {OUT} ({w}x{h}, {len(TEXT)} glyphs)")


if __name__ == "__main__":
    main()
