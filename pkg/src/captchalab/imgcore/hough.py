"""Straight-line detection and removal on ink masks.

Detection votes in (rho, theta) space quantized at 1 px and 1 degree.
Removal erases only line pixels whose vertical ink run is short, so
character strokes crossing a line survive, then applies one binary
closing to repair the cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import close3
from .image import BinaryImage


@dataclass(frozen=True)
class LineParams:
    """One detected line: x*cos(theta) + y*sin(theta) = rho.

    rho is a signed distance in pixels, theta an integer angle in degrees
    in [0, 180), votes the accumulator count behind the detection.
    """

    rho: int
    theta: int
    votes: int


def _diag(width: int, height: int) -> int:
    return math.ceil(math.sqrt(width * width + height * height))


def hough_lines(img: BinaryImage, vote_threshold: int) -> list[LineParams]:
    """Detect lines with at least vote_threshold supporting ink pixels.

    Every ink pixel votes once per angle; rho bins use round-half-up.
    Peaks are kept greedily (highest votes first) with non-maximum
    suppression over a +-2 px / +-2 degree neighborhood, and returned
    sorted by votes descending.
    """
    if vote_threshold < 1:
        raise ValueError(f"vote_threshold must be >= 1, got {vote_threshold}")
    ys, xs = np.nonzero(img.mask)
    if len(xs) == 0:
        return []
    d = _diag(img.width, img.height)
    n_rho = 2 * d + 1
    thetas = np.deg2rad(np.arange(180))
    acc = np.zeros((180, n_rho), dtype=np.int64)
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)
    xs_f = xs.astype(np.float64)
    ys_f = ys.astype(np.float64)
    for t in range(180):
        rho = np.floor(xs_f * cos_t[t] + ys_f * sin_t[t] + 0.5).astype(np.int64)
        acc[t] += np.bincount(rho + d, minlength=n_rho)

    cand_t, cand_r = np.nonzero(acc >= vote_threshold)
    if len(cand_t) == 0:
        return []
    votes = acc[cand_t, cand_r]
    order = np.lexsort((cand_r, cand_t, -votes))
    kept: list[LineParams] = []
    for i in order:
        t, r, v = int(cand_t[i]), int(cand_r[i]), int(votes[i])
        if any(abs(t - k.theta) <= 2 and abs((r - d) - k.rho) <= 2 for k in kept):
            continue
        kept.append(LineParams(rho=r - d, theta=t, votes=v))
    return kept


def _vertical_run_lengths(mask: np.ndarray) -> np.ndarray:
    """Length of the vertical ink run through each cell (0 where background)."""
    h, w = mask.shape
    runs = np.zeros((h, w), dtype=np.int32)
    for x in range(w):
        col = mask[:, x]
        y = 0
        while y < h:
            if col[y]:
                y0 = y
                while y < h and col[y]:
                    y += 1
                runs[y0:y, x] = y - y0
            else:
                y += 1
    return runs


def erase_lines(img: BinaryImage, lines: list[LineParams], max_run: int) -> BinaryImage:
    """Erase detected lines, sparing pixels that sit on a tall vertical ink run.

    A pixel is erased when it lies within distance 1.0 of any line and its
    vertical run length is <= max_run. One closing pass then repairs strokes
    the lines had cut.
    """
    if max_run < 1:
        raise ValueError(f"max_run must be >= 1, got {max_run}")
    mask = img.mask.copy()
    if lines:
        ys, xs = np.nonzero(mask)
        near = np.zeros(len(xs), dtype=bool)
        for line in lines:
            theta = math.radians(line.theta)
            dist = np.abs(xs * math.cos(theta) + ys * math.sin(theta) - line.rho)
            near |= dist <= 1.0
        runs = _vertical_run_lengths(mask)
        erase = near & (runs[ys, xs] <= max_run)
        mask[ys[erase], xs[erase]] = False
    return close3(BinaryImage(mask))
