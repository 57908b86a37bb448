"""Binary PGM (P5) image reading and writing.

Only 8-bit grayscale is supported (maxval <= 255). Writing is deterministic:
the same array always produces the same bytes, so files can be compared
bit-exactly in tests.
"""

from __future__ import annotations

import numpy as np


class PgmError(ValueError):
    """Raised when a file is not a valid 8-bit P5 PGM."""


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comment lines, then read one token.
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise PgmError("truncated PGM header")
    return data[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM file into a (height, width) uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _read_token(data, 0)
    if magic != b"P5":
        raise PgmError(f"not a binary PGM (magic {magic!r})")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(data, pos)
        if not tok.isdigit():
            raise PgmError(f"bad header token {tok!r}")
        fields.append(int(tok))
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise PgmError(f"bad dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise PgmError(f"unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise PgmError("truncated PGM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, image: np.ndarray) -> None:
    """Write a (height, width) uint8 array as a binary PGM file."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise PgmError(f"expected a 2-D array, got shape {image.shape}")
    if image.dtype != np.uint8:
        raise PgmError(f"expected uint8 samples, got {image.dtype}")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(image.tobytes())
