"""Netpbm grayscale (PGM) I/O and reproducible white Gaussian noise.

Noise samples come from the Philox4x64 counter-based generator keyed by the
seed: the raw 64-bit word at counter position ``k`` is mapped to a uniform
``(top 53 bits + 0.5) * 2**-53`` in ``(0, 1)``, and consecutive uniforms
``(u1, u2)`` go through the Box-Muller transform ``sqrt(-2 ln u1) * cos(2 pi
u2)``, ``sqrt(-2 ln u1) * sin(2 pi u2)``. Pixel ``p`` (row-major) receives
normal number ``p``, so the field depends only on the seed and image size.
"""

from __future__ import annotations

import os
import re
from importlib import resources

import numpy as np

from .framelet import as_image

_WHITESPACE = b" \t\r\n\v\f"
U64_MASK = (1 << 64) - 1


class PgmError(ValueError):
    """Malformed PGM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def _header_tokens(data: bytes, count: int) -> tuple[list[int], list[int], int]:
    """Read ``count`` integer header fields after the magic number.

    Returns the values, their byte offsets, and the offset just past the
    single whitespace byte that terminates the last field.
    """
    pos = 2
    values, starts = [], []
    while len(values) < count:
        while pos < len(data) and (data[pos] in _WHITESPACE or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                end = data.find(b"\n", pos)
                pos = len(data) if end < 0 else end + 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos] in b"0123456789":
            pos += 1
        if start == pos:
            if pos >= len(data):
                raise PgmError("truncated header", pos)
            raise PgmError(f"expected an integer header field, found {data[pos:pos + 1]!r}", pos)
        values.append(int(data[start:pos]))
        starts.append(start)
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PgmError("header must end with a whitespace byte", pos)
    return values, starts, pos + 1


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a P2 or P5 PGM into a float image scaled to ``[0, 255]``."""
    if len(data) < 2 or data[:2] not in (b"P2", b"P5"):
        raise PgmError("not a P2/P5 PGM file (bad magic number)", 0)
    magic = data[:2]
    (width, height, maxval), starts, pos = _header_tokens(data, 3)
    if width < 1 or height < 1:
        raise PgmError(f"invalid dimensions {width}x{height}", starts[0] if width < 1 else starts[1])
    if not 1 <= maxval <= 255:
        raise PgmError(f"maxval {maxval} outside 1..255", starts[2])
    count = width * height

    if magic == b"P5":
        payload = data[pos : pos + count]
        if len(payload) < count:
            raise PgmError(f"truncated pixel data: {len(payload)} of {count} bytes", len(data))
        pixels = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
        bad = np.flatnonzero(pixels > maxval)
        if bad.size:
            raise PgmError(f"pixel value {pixels[bad[0]]} exceeds maxval {maxval}", pos + int(bad[0]))
    else:
        pixels = []
        for match in re.finditer(rb"#[^\n]*|\d+|\S+", data[pos:]):
            token = match.group()
            if token.startswith(b"#"):
                continue
            offset = pos + match.start()
            if not token.isdigit():
                raise PgmError(f"invalid pixel token {token!r}", offset)
            value = int(token)
            if value > maxval:
                raise PgmError(f"pixel value {value} exceeds maxval {maxval}", offset)
            pixels.append(value)
            if len(pixels) == count:
                break
        if len(pixels) < count:
            raise PgmError(f"truncated pixel data: {len(pixels)} of {count} values", len(data))
        pixels = np.array(pixels, dtype=np.int64)

    image = pixels.reshape(height, width).astype(np.float64)
    if maxval != 255:
        image *= 255.0 / maxval
    return image


def quantize(image) -> np.ndarray:
    """Clamp to ``[0, 255]`` and round half away from zero to ``uint8``."""
    x = np.clip(as_image(image), 0.0, 255.0)
    return np.floor(x + 0.5).astype(np.uint8)


def write_pgm(image, fmt: str = "P5") -> bytes:
    pixels = quantize(image)
    height, width = pixels.shape
    header = f"{fmt}\n{width} {height}\n255\n".encode("ascii")
    if fmt == "P5":
        return header + pixels.tobytes()
    if fmt == "P2":
        lines = (" ".join(str(v) for v in row) for row in pixels)
        return header + ("\n".join(lines) + "\n").encode("ascii")
    raise ValueError(f"unknown PGM format {fmt!r}; use P2 or P5")


def load_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path: str | os.PathLike, image, fmt: str = "P5") -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(image, fmt))


def bundled_image(name: str) -> np.ndarray:
    """Bundled 256x256 grayscale test image: ``camera`` or ``astronaut``."""
    ref = resources.files("frameletshrink") / "data" / f"{name}.pgm"
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled test image named {name!r}")
    return read_pgm(ref.read_bytes())


TEST_IMAGES = ("camera", "astronaut")


def gaussian_field(shape: tuple[int, int], seed: int) -> np.ndarray:
    """Unit-variance white Gaussian field, a pure function of ``(shape, seed)``."""
    n = int(np.prod(shape))
    bitgen = np.random.Philox(key=int(seed) & U64_MASK)
    raw = bitgen.random_raw(2 * ((n + 1) // 2))
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * u1.size)
    z[0::2] = r * np.cos(2 * np.pi * u2)
    z[1::2] = r * np.sin(2 * np.pi * u2)
    return z[:n].reshape(shape)


def add_awgn(image, sigma: float, seed: int) -> np.ndarray:
    """Add zero-mean white Gaussian noise of std ``sigma``; no clamping."""
    if not sigma >= 0:
        raise ValueError("sigma must be >= 0")
    x = as_image(image)
    if sigma == 0:
        return x.copy()
    return x + sigma * gaussian_field(x.shape, seed)
