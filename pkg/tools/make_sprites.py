"""Build the bundled object sprites (src/captchalab/data/sprites/).

Ten simple nameable shapes drawn with numpy, stored as P5 bitmaps (ink 0,
background 255) plus a manifest.json mapping labels to files.

    python3 tools/make_sprites.py
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from captchalab.imgcore import RasterImage, pgm_encode  # noqa: E402

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "captchalab",
                       "data", "sprites")


def grid(n):
    yy, xx = np.mgrid[0:n, 0:n]
    c = (n - 1) / 2.0
    return xx - c, yy - c


def disc(n=26):
    x, y = grid(n)
    return x * x + y * y <= (n * 0.42) ** 2


def ring(n=26):
    x, y = grid(n)
    r2 = x * x + y * y
    return (r2 <= (n * 0.44) ** 2) & (r2 >= (n * 0.28) ** 2)


def cross(n=26):
    x, y = grid(n)
    return (np.abs(x) <= n * 0.14) | (np.abs(y) <= n * 0.14)


def diamond(n=26):
    x, y = grid(n)
    return np.abs(x) + np.abs(y) <= n * 0.46


def star(n=27):
    x, y = grid(n)
    r = np.hypot(x, y)
    ang = np.arctan2(y, x)
    spikes = 0.55 + 0.45 * np.cos(5 * ang)
    return r <= n * 0.48 * spikes


def house(n=26):
    m = np.zeros((n, n), dtype=bool)
    m[n // 2:n - 2, 3:n - 3] = True
    for i in range(n // 2):
        m[i + 2, n // 2 - i - 1:n // 2 + i + 1] = True
    return m


def arrow(n=26):
    m = np.zeros((n, n), dtype=bool)
    mid = n // 2
    m[mid - 3:mid + 3, 2:n - 8] = True
    for i in range(8):
        m[mid - 8 + i, n - 10 + i // 2: n - 2 - i] = True
        m[mid + 8 - i - 1, n - 10 + i // 2: n - 2 - i] = True
    return m


def key(n=28):
    m = np.zeros((n, n), dtype=bool)
    x, y = grid(12)
    head = (x * x + y * y <= 25) & (x * x + y * y >= 6)
    m[8:20, 0:12] |= head
    m[12:16, 11:26] = True
    m[16:20, 20:22] = True
    m[16:20, 24:26] = True
    return m


def cup(n=26):
    m = np.zeros((n, n), dtype=bool)
    m[6:20, 4:18] = True
    m[6:16, 7:15] = False
    m[8:14, 18:23] = True
    m[9:13, 19:21] = False
    m[20:23, 6:16] = True
    return m


def tree(n=28):
    m = np.zeros((n, n), dtype=bool)
    for i in range(14):  # canopy triangle
        m[3 + i, max(0, 13 - i):min(n, 14 + i)] = True
    m[17:25, 11:16] = True  # trunk
    return m


SHAPES = {
    "disc": disc,
    "ring": ring,
    "cross": cross,
    "diamond": diamond,
    "star": star,
    "house": house,
    "arrow": arrow,
    "key": key,
    "cup": cup,
    "tree": tree,
}


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    manifest = []
    for label, fn in SHAPES.items():
        mask = fn()
        px = np.where(mask, 0, 255).astype(np.uint8)
        fname = f"{label}.pgm"
        with open(os.path.join(OUT_DIR, fname), "wb") as fh:
            fh.write(pgm_encode(RasterImage(px)))
        manifest.append({"label": label, "file": fname})
    with open(os.path.join(OUT_DIR, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"wrote {len(manifest)} sprites to {OUT_DIR}")


if __name__ == "__main__":
    main()
