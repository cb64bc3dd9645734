"""3x3 neighborhood filters over grayscale images and ink masks.

Border pixels use the window clipped to the image (4 cells in corners,
6 along edges), so the filters are total functions with no padding
artifacts. Tie rules are fixed: the median of an even count is the lower
median, and the mean rounds half up. On masks those reduce to majority
vote, OR, and ">= half ink" respectively.
"""

from __future__ import annotations

from typing import Literal, overload

import numpy as np

from .image import BinaryImage, RasterImage

FilterKind = Literal["median", "max", "mean"]

_OFFSETS = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1)]


def _window_stack(arr: np.ndarray, fill):
    """Stack the 9 shifted copies of arr plus a per-cell validity mask."""
    h, w = arr.shape
    stack = np.full((9, h, w), fill, dtype=arr.dtype)
    valid = np.zeros((9, h, w), dtype=bool)
    for k, (dy, dx) in enumerate(_OFFSETS):
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        ys_src = slice(max(0, dy), h + min(0, dy))
        xs_src = slice(max(0, dx), w + min(0, dx))
        stack[k][ys, xs] = arr[ys_src, xs_src]
        valid[k][ys, xs] = True
    return stack, valid


def _filter3_gray(px: np.ndarray, kind: FilterKind) -> np.ndarray:
    # Sentinel 4096 sorts invalid cells above every real intensity.
    stack, valid = _window_stack(px.astype(np.int16), np.int16(4096))
    stack[~valid] = 4096
    n = valid.sum(axis=0)
    if kind == "median":
        ordered = np.sort(stack, axis=0)
        idx = (n - 1) // 2
        out = np.take_along_axis(ordered, idx[None, :, :], axis=0)[0]
    elif kind == "max":
        masked = np.where(valid, stack, np.int16(-1))
        out = masked.max(axis=0)
    elif kind == "mean":
        total = np.where(valid, stack, 0).sum(axis=0, dtype=np.int32)
        out = (2 * total + n) // (2 * n)
    else:
        raise ValueError(f"unknown filter kind {kind!r}")
    return out.astype(np.uint8)


def _filter3_binary(mask: np.ndarray, kind: FilterKind) -> np.ndarray:
    stack, valid = _window_stack(mask, False)
    n = valid.sum(axis=0)
    ink = (stack & valid).sum(axis=0)
    if kind == "median":
        return 2 * ink > n
    if kind == "max":
        return ink > 0
    if kind == "mean":
        return 2 * ink >= n
    raise ValueError(f"unknown filter kind {kind!r}")


@overload
def filter3(img: RasterImage, kind: FilterKind) -> RasterImage: ...
@overload
def filter3(img: BinaryImage, kind: FilterKind) -> BinaryImage: ...


def filter3(img, kind: FilterKind):
    """Apply a 3x3 median/max/mean filter, returning the same image type."""
    if isinstance(img, RasterImage):
        return RasterImage(_filter3_gray(img.pixels, kind))
    if isinstance(img, BinaryImage):
        return BinaryImage(_filter3_binary(img.mask, kind))
    raise TypeError(f"filter3 expects RasterImage or BinaryImage, got {type(img)!r}")


def erode3(img: BinaryImage) -> BinaryImage:
    """3x3 erosion: a cell stays ink only if its whole clipped window is ink."""
    stack, valid = _window_stack(img.mask, False)
    n = valid.sum(axis=0)
    ink = (stack & valid).sum(axis=0)
    return BinaryImage(ink == n)


def close3(img: BinaryImage) -> BinaryImage:
    """Binary closing: 3x3 dilation (filter3 max) followed by 3x3 erosion."""
    return erode3(filter3(img, "max"))
