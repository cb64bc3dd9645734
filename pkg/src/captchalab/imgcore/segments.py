"""Character segmentation: connected components, ordering fixes, resampling.

The breaking pipeline needs exactly one segment per character. Components
come out of labeling unordered and possibly fragmented or fused, so
order_and_fix_segments merges column-overlapping blobs, drops or splits
until the expected count is reached, and assigns left-to-right indices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import SegmentationError
from .image import BinaryImage

#: Components smaller than this many pixels are dropped as noise residue.
MIN_COMPONENT_AREA = 15

#: Feature vectors are this grid flattened row-major (values 0.0 or 1.0).
FEATURE_GRID = 10


@dataclass(frozen=True)
class Segment:
    """One candidate character: its bbox in the source image and cropped mask.

    order_index is -1 until assigned by order_and_fix_segments.
    """

    bbox: tuple[int, int, int, int]  # left, top, width, height
    mask: BinaryImage
    order_index: int = -1

    @property
    def left(self) -> int:
        return self.bbox[0]

    @property
    def top(self) -> int:
        return self.bbox[1]

    @property
    def width(self) -> int:
        return self.bbox[2]

    @property
    def height(self) -> int:
        return self.bbox[3]

    @property
    def right(self) -> int:
        return self.bbox[0] + self.bbox[2]

    @property
    def area(self) -> int:
        return self.mask.ink_count


_NEIGHBORS8 = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


def connected_components(img: BinaryImage, min_area: int = MIN_COMPONENT_AREA) -> list[Segment]:
    """Label ink under 8-connectivity; one Segment per component.

    Components with fewer than min_area pixels are discarded. Segments are
    returned unordered (order_index -1).
    """
    mask = img.mask
    h, w = mask.shape
    labels = np.full((h, w), -1, dtype=np.int32)
    segments: list[Segment] = []
    for sy, sx in zip(*np.nonzero(mask)):
        if labels[sy, sx] != -1:
            continue
        label = len(segments)
        stack = [(int(sy), int(sx))]
        labels[sy, sx] = label
        pixels = []
        while stack:
            y, x = stack.pop()
            pixels.append((y, x))
            for dy, dx in _NEIGHBORS8:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and labels[ny, nx] == -1:
                    labels[ny, nx] = label
                    stack.append((ny, nx))
        ys = [p[0] for p in pixels]
        xs = [p[1] for p in pixels]
        top, bottom = min(ys), max(ys)
        left, right = min(xs), max(xs)
        crop = np.zeros((bottom - top + 1, right - left + 1), dtype=bool)
        for y, x in pixels:
            crop[y - top, x - left] = True
        seg = Segment(bbox=(left, top, right - left + 1, bottom - top + 1),
                      mask=BinaryImage(crop))
        segments.append(seg)
    return [s for s in segments if s.area >= min_area]


def _merge_pair(a: Segment, b: Segment) -> Segment:
    left = min(a.left, b.left)
    top = min(a.top, b.top)
    right = max(a.right, b.right)
    bottom = max(a.top + a.height, b.top + b.height)
    merged = np.zeros((bottom - top, right - left), dtype=bool)
    for s in (a, b):
        merged[s.top - top:s.top - top + s.height,
               s.left - left:s.left - left + s.width] |= s.mask.mask
    return Segment(bbox=(left, top, right - left, bottom - top), mask=BinaryImage(merged))


def _merge_overlapping(segs: list[Segment]) -> list[Segment]:
    """Merge any two segments whose column spans overlap by >= 50% of the narrower."""
    segs = list(segs)
    changed = True
    while changed:
        changed = False
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                a, b = segs[i], segs[j]
                overlap = min(a.right, b.right) - max(a.left, b.left)
                if overlap >= 0.5 * min(a.width, b.width):
                    segs[i] = _merge_pair(a, b)
                    del segs[j]
                    changed = True
                    break
            if changed:
                break
    return segs


def _tighten(mask: np.ndarray, left: int, top: int) -> Segment | None:
    """Crop a mask to its ink bbox; None when the mask is empty."""
    ys, xs = np.nonzero(mask)
    if len(ys) == 0:
        return None
    t, b = ys.min(), ys.max()
    l, r = xs.min(), xs.max()
    return Segment(bbox=(left + int(l), top + int(t), int(r - l) + 1, int(b - t) + 1),
                   mask=BinaryImage(mask[t:b + 1, l:r + 1]))


def order_and_fix_segments(segs: list[Segment], expected: int) -> list[Segment]:
    """Coerce a segment list to exactly `expected` ordered character segments.

    Overlapping segments merge first. A surplus keeps the `expected` largest
    by area; a deficit repeatedly splits the widest segment at its middle
    column. Returns segments sorted by left edge with order_index assigned.
    """
    if expected < 1:
        raise ValueError(f"expected must be >= 1, got {expected}")
    if not segs:
        raise SegmentationError("no segments to order")
    segs = _merge_overlapping(segs)
    segs.sort(key=lambda s: (s.left, s.top))

    if len(segs) > expected:
        by_area = sorted(segs, key=lambda s: (-s.area, s.left, s.top))
        segs = sorted(by_area[:expected], key=lambda s: (s.left, s.top))

    unsplittable: set[int] = set()
    while len(segs) < expected:
        candidates = [(i, s) for i, s in enumerate(segs)
                      if s.width >= 2 and id(s) not in unsplittable]
        if not candidates:
            raise SegmentationError(
                f"cannot split down to {expected} segments, stuck at {len(segs)}")
        i, widest = max(candidates, key=lambda t: (t[1].width, -t[1].left))
        half = widest.width // 2
        pieces = [
            _tighten(widest.mask.mask[:, :half].copy(), widest.left, widest.top),
            _tighten(widest.mask.mask[:, half:].copy(), widest.left + half, widest.top),
        ]
        pieces = [p for p in pieces if p is not None]
        if len(pieces) < 2:
            # Ink all on one side; keep the tightened piece but never retry it.
            unsplittable.add(id(pieces[0]))
            segs[i:i + 1] = pieces
        else:
            segs[i:i + 1] = pieces
        segs.sort(key=lambda s: (s.left, s.top))

    return [replace(s, order_index=k) for k, s in enumerate(segs)]


def resize10(seg: Segment) -> np.ndarray:
    """Resample a segment's mask onto a 10x10 grid by nearest neighbor.

    Cell (i, j) samples source pixel (floor((i+0.5)*w/10), floor((j+0.5)*h/10)).
    Returns a flat float array of 100 zeros/ones, row-major.
    """
    mask = seg.mask.mask
    h, w = mask.shape
    g = FEATURE_GRID
    xs = [((2 * i + 1) * w) // (2 * g) for i in range(g)]
    ys = [((2 * j + 1) * h) // (2 * g) for j in range(g)]
    out = mask[np.ix_(ys, xs)].astype(np.float64)
    return out.reshape(g * g)
