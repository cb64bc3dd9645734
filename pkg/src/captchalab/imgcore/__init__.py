"""Deterministic raster primitives: containers, drawing, filtering,
line detection/removal, segmentation, and the PGM codec."""

from .filters import close3, erode3, filter3
from .hough import LineParams, erase_lines, hough_lines
from .image import (
    BinaryImage,
    RasterImage,
    add_salt_pepper,
    blit_bitmap,
    draw_line,
    threshold_below,
)
from .pgm import pgm_decode, pgm_encode
from .rng import Rng
from .segments import (
    MIN_COMPONENT_AREA,
    Segment,
    connected_components,
    order_and_fix_segments,
    resize10,
)

__all__ = [
    "BinaryImage",
    "LineParams",
    "MIN_COMPONENT_AREA",
    "RasterImage",
    "Rng",
    "Segment",
    "add_salt_pepper",
    "blit_bitmap",
    "close3",
    "connected_components",
    "draw_line",
    "erase_lines",
    "erode3",
    "filter3",
    "hough_lines",
    "order_and_fix_segments",
    "pgm_decode",
    "pgm_encode",
    "resize10",
    "threshold_below",
]
