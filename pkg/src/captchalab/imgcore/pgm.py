"""Binary PGM (P5) encoder/decoder, the package's only image file format.

Encoding always writes the canonical header "P5\\n<w> <h>\\n255\\n" followed
by raw row-major bytes. Decoding accepts standard PNM whitespace and
'#' comments in the header but requires maxval 255.
"""

from __future__ import annotations

from ..errors import CodecError
from .image import RasterImage

import numpy as np


def pgm_encode(img: RasterImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise CodecError("truncated PGM header")
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def pgm_decode(data: bytes) -> RasterImage:
    if data[:2] != b"P5":
        raise CodecError(f"not a binary PGM (magic {data[:2]!r})")
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _read_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise CodecError(f"bad PGM header token {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise CodecError(f"bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise CodecError(f"unsupported maxval {maxval} (only 255)")
    pos += 1  # single whitespace byte after maxval
    payload = data[pos:pos + width * height]
    if len(payload) != width * height:
        raise CodecError(
            f"truncated PGM payload: expected {width * height} bytes, got {len(payload)}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return RasterImage(pixels)
