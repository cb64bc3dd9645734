"""Grayscale canvas and ink-mask containers plus the drawing primitives.

Convention used throughout the package: 0 is black ink, 255 is white
background. A BinaryImage marks ink (foreground) cells with True.
Both containers are frozen after construction; every operation returns
a new image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PlacementError
from .rng import Rng


@dataclass(frozen=True)
class RasterImage:
    """8-bit grayscale image, row-major, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"pixels must be 2-D and non-empty, got shape {px.shape}")
        px = np.ascontiguousarray(px).copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def blank(cls, width: int, height: int, intensity: int = 255) -> "RasterImage":
        return cls(np.full((height, width), intensity, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        return isinstance(other, RasterImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class BinaryImage:
    """Boolean ink mask, row-major, shape (height, width). True = ink."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"mask must be 2-D and non-empty, got shape {m.shape}")
        m = np.ascontiguousarray(m).copy()
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def ink_count(self) -> int:
        return int(self.mask.sum())

    @classmethod
    def blank(cls, width: int, height: int) -> "BinaryImage":
        return cls(np.zeros((height, width), dtype=bool))

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryImage) and np.array_equal(self.mask, other.mask)


def threshold_below(img: RasterImage, t: int) -> BinaryImage:
    """Mark every pixel strictly darker than t as ink.

    With the default generator intensities (ink 0, shadow 160) a threshold
    of 128 keeps the characters and drops their shadows.
    """
    return BinaryImage(img.pixels < t)


def draw_line(img: RasterImage, start: tuple[int, int], end: tuple[int, int],
              intensity: int) -> RasterImage:
    """Rasterize a 1-px line from start to end (Bresenham, all octants)."""
    w, h = img.width, img.height
    for x, y in (start, end):
        if not (0 <= x < w and 0 <= y < h):
            raise PlacementError(f"line endpoint ({x},{y}) outside {w}x{h} image")
    px = img.pixels.copy()
    x0, y0 = start
    x1, y1 = end
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        px[y0, x0] = intensity
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy
    return RasterImage(px)


def blit_bitmap(img: RasterImage, bitmap: BinaryImage, at: tuple[int, int],
                intensity: int, scale: int = 1) -> RasterImage:
    """Paint a bitmap onto the canvas; each True cell becomes a scale x scale block.

    False cells leave the canvas untouched. The scaled bitmap must fit
    entirely inside the canvas.
    """
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    x, y = at
    bw, bh = bitmap.width * scale, bitmap.height * scale
    if x < 0 or y < 0 or x + bw > img.width or y + bh > img.height:
        raise PlacementError(
            f"bitmap {bw}x{bh} at ({x},{y}) does not fit inside {img.width}x{img.height}")
    px = img.pixels.copy()
    scaled = np.kron(bitmap.mask, np.ones((scale, scale), dtype=bool))
    region = px[y:y + bh, x:x + bw]
    region[scaled] = intensity
    px[y:y + bh, x:x + bw] = region
    return RasterImage(px)


def add_salt_pepper(img: RasterImage, density: float, rng: Rng) -> RasterImage:
    """Flip each pixel to pure white or pure black with probability `density`.

    Draw order is fixed: pixels are visited row-major; each consumes one
    flip draw, and a flipped pixel consumes one extra draw for its color
    (< 0.5 means white). This keeps the output a pure function of the
    rng state.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    px = img.pixels.copy()
    h, w = px.shape
    for yy in range(h):
        for xx in range(w):
            if rng.next_float() < density:
                px[yy, xx] = 255 if rng.next_float() < 0.5 else 0
    return RasterImage(px)
