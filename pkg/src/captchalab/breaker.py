"""Breaking pipeline: degraded challenge image in, text string out.

Stages run in a fixed order: shadow removal by thresholding, noise
removal by median filtering, line removal via the Hough transform plus
run-aware erasure, contour segmentation, 10x10 resampling, and per-
segment classification. An alternative cleanup chain (max, median, mean
filters then a global Otsu threshold) is provided for heavily speckled
print-style images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SegmentationError
from .imgcore import (
    BinaryImage,
    RasterImage,
    connected_components,
    erase_lines,
    filter3,
    hough_lines,
    order_and_fix_segments,
    resize10,
    threshold_below,
)
from .ocrnet import NetModel, classify


@dataclass(frozen=True)
class BreakerConfig:
    shadow_threshold: int = 128
    median_passes: int = 1
    hough_vote_fraction: float = 0.5  # of image width
    line_max_run: int = 3
    expected_chars: int = 4

    def __post_init__(self):
        if not 0.0 < self.hough_vote_fraction <= 1.0:
            raise ValueError("hough_vote_fraction must be in (0, 1]")
        if self.expected_chars < 1:
            raise ValueError("expected_chars must be >= 1")


@dataclass(frozen=True)
class BreakResult:
    text: str
    per_char_confidence: tuple[float, ...]
    stage_images: dict[str, BinaryImage] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.per_char_confidence) != len(self.text):
            raise ValueError("one confidence per character required")


def break_captcha(img: RasterImage, model: NetModel, cfg: BreakerConfig | None = None,
                  keep_stages: bool = False) -> BreakResult:
    """Run the full pipeline and return the concatenated classification.

    Raises SegmentationError when cleaning leaves no ink to segment.
    """
    cfg = cfg or BreakerConfig()
    stages: dict[str, BinaryImage] = {}

    mask = threshold_below(img, cfg.shadow_threshold)
    if keep_stages:
        stages["threshold"] = mask
    for _ in range(cfg.median_passes):
        mask = filter3(mask, "median")
    if keep_stages:
        stages["median"] = mask

    vote_threshold = max(1, int(cfg.hough_vote_fraction * img.width))
    lines = hough_lines(mask, vote_threshold)
    mask = erase_lines(mask, lines, cfg.line_max_run)
    if keep_stages:
        stages["lines_removed"] = mask

    if mask.ink_count == 0:
        raise SegmentationError("no ink left after cleaning")
    segments = connected_components(mask)
    if not segments:
        raise SegmentationError("no components above the noise threshold")
    ordered = order_and_fix_segments(segments, cfg.expected_chars)

    letters = []
    confidences = []
    for seg in ordered:
        letter, conf = classify(model, resize10(seg))
        letters.append(letter)
        confidences.append(conf)
    return BreakResult(text="".join(letters),
                       per_char_confidence=tuple(confidences),
                       stage_images=stages)


def otsu_threshold(img: RasterImage) -> int:
    """Threshold maximizing between-class variance; ties pick the lower value.

    A pixel is "dark" when strictly below the returned threshold.
    """
    hist = np.bincount(img.pixels.reshape(-1), minlength=256).astype(np.float64)
    total = hist.sum()
    values = np.arange(256, dtype=np.float64)
    best_t, best_var = 0, -1.0
    cum_n = np.cumsum(hist)
    cum_v = np.cumsum(hist * values)
    for t in range(256):
        n0 = cum_n[t - 1] if t > 0 else 0.0
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            var = 0.0
        else:
            mu0 = (cum_v[t - 1] if t > 0 else 0.0) / n0
            mu1 = (cum_v[255] - (cum_v[t - 1] if t > 0 else 0.0)) / n1
            var = n0 * n1 * (mu0 - mu1) ** 2
        if var > best_var:
            best_var, best_t = var, t
    return best_t


def enhance_pessimal(img: RasterImage) -> BinaryImage:
    """Cleanup chain for degraded printed text: max, median, mean, then Otsu.

    The max filter suppresses dark speckle, the median and mean smooth the
    strokes back together, and the global threshold re-binarizes. Returns
    the ink mask (pixels below the Otsu value).
    """
    out = filter3(img, "max")
    out = filter3(out, "median")
    out = filter3(out, "mean")
    return threshold_below(out, otsu_threshold(out))
