"""Reading and writing binary 8-bit grayscale images (portable graymap, "P5")."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence


class MalformedFrame(Exception):
    """Frame file is not a valid binary 8-bit grayscale image."""


def _read_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        ch = data[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < n and data[pos] != 0x0A:
                pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise MalformedFrame("truncated header")
    return data[start:pos], pos


def read_pgm(path: str | Path) -> tuple[int, int, bytes]:
    """Parse a binary PGM file and return (width, height, row-major pixels)."""
    data = Path(path).read_bytes()
    magic, pos = _read_header_token(data, 0)
    if magic != b"P5":
        raise MalformedFrame(f"bad magic {magic!r}, expected b'P5'")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _read_header_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise MalformedFrame(f"non-numeric {name} token {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise MalformedFrame(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise MalformedFrame(f"maxval {maxval} is not 8-bit")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedFrame("missing raster separator")
    raster = data[pos + 1 :]
    if len(raster) != width * height:
        raise MalformedFrame(
            f"raster has {len(raster)} bytes, expected {width * height}"
        )
    return width, height, raster


def write_pgm(path: str | Path, width: int, height: int, pixels: bytes | Sequence[int]) -> None:
    """Write row-major 8-bit pixels as a binary PGM file."""
    raw = bytes(pixels)
    if len(raw) != width * height:
        raise ValueError(f"{len(raw)} pixels for {width}x{height} image")
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + raw)
