"""Binary (P5) PGM image I/O for 8-bit grayscale images."""

from __future__ import annotations

import numpy as np

__all__ = ["read_pgm", "write_pgm"]


def _next_token(data, pos):
    # skip whitespace and '#' comment lines between header tokens
    while pos < len(data):
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def read_pgm(path):
    """Read a binary P5 PGM with maxval 255 into a uint8 (height, width) array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {magic!r})")
    width, pos = _next_token(data, pos)
    height, pos = _next_token(data, pos)
    maxval, pos = _next_token(data, pos)
    if int(maxval) != 255:
        raise ValueError(f"{path}: only maxval 255 is supported, got {int(maxval)}")
    w, h = int(width), int(height)
    pos += 1  # single whitespace byte separates header and raster
    raster = data[pos:pos + w * h]
    if len(raster) != w * h:
        raise ValueError(f"{path}: truncated raster ({len(raster)} of {w * h} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w).copy()


def write_pgm(path, img):
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("image must be a 2-d uint8 array")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
