"""Grayscale image ingestion/export for stream-function data.

Canonical interchange format is binary PGM (P5): magic `P5`, ASCII width,
height and maxval 255 separated by whitespace (comments allowed), a single
whitespace byte, then width*height raw intensity bytes in row-major order.
8-bit grayscale PNG is accepted/produced for convenience.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import IngestionError, ParameterError
from .fields import GridSpec, ScalarField, apply_taper

__all__ = ["IntensityImage", "load_image", "load_image_bytes", "save_pgm",
           "save_png", "intensity_to_stream", "field_to_image", "STREAM_SCALE"]

STREAM_SCALE = 0.0025  # maps intensities 0..255 onto 0..0.6375

_PGM_HEADER = re.compile(
    rb"^P5\s+(?:#.*\s+)*(\d+)\s+(?:#.*\s+)*(\d+)\s+(?:#.*\s+)*(\d+)\s")


@dataclass(frozen=True)
class IntensityImage:
    """8-bit grayscale pixels, row-major; pixels[row, col] with row = y."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        px = self.pixels
        if px.dtype != np.uint8 or px.shape != (self.height, self.width):
            raise IngestionError(
                f"expected uint8 pixels of shape ({self.height}, {self.width})")

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> "IntensityImage":
        px = np.ascontiguousarray(pixels, dtype=np.uint8)
        return cls(width=px.shape[1], height=px.shape[0], pixels=px)


def _load_pgm(data: bytes, path: str) -> IntensityImage:
    m = _PGM_HEADER.match(data)
    if not m:
        raise IngestionError(f"{path}: not a binary PGM (P5) header")
    w, h, maxval = (int(g) for g in m.groups())
    if maxval != 255:
        raise IngestionError(f"{path}: expected 8-bit PGM (maxval 255), got {maxval}")
    raw = data[m.end():]
    if len(raw) < w * h:
        raise IngestionError(f"{path}: truncated PGM payload ({len(raw)} < {w * h})")
    px = np.frombuffer(raw[:w * h], dtype=np.uint8).reshape(h, w)
    return IntensityImage(width=w, height=h, pixels=px.copy())


def load_image_bytes(data: bytes, name: str = "<bytes>") -> IntensityImage:
    """Decode PGM (P5) or 8-bit grayscale PNG from a byte string."""
    if data[:2] == b"P5":
        return _load_pgm(data, name)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        try:
            img = Image.open(io.BytesIO(data))
            img.load()
        except Exception as exc:
            raise IngestionError(f"{name}: cannot read PNG: {exc}") from exc
        if img.mode != "L":
            raise IngestionError(
                f"{name}: expected 8-bit grayscale PNG (mode L), got mode {img.mode}")
        return IntensityImage.from_array(np.asarray(img, dtype=np.uint8))
    raise IngestionError(f"{name}: unrecognized format (expected PGM P5 or PNG)")


def load_image(path) -> IntensityImage:
    """Read a binary PGM (P5) or 8-bit grayscale PNG, pixel-exact."""
    p = Path(path)
    if not p.is_file():
        raise IngestionError(f"{path}: no such file")
    return load_image_bytes(p.read_bytes(), str(p))


def save_pgm(img: IntensityImage, path) -> None:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.tobytes())


def save_png(img: IntensityImage, path) -> None:
    Image.fromarray(img.pixels, mode="L").save(str(path), format="PNG")


def png_bytes(img: IntensityImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img.pixels, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def intensity_to_stream(img: IntensityImage, scale: float = STREAM_SCALE,
                        taper_width: int = 8) -> ScalarField:
    """Rescale intensities into a stream function and taper it to vanish at
    the boundary; field x runs along image columns."""
    if img.width != img.height:
        raise IngestionError(
            f"expected a square image, got {img.width}x{img.height}")
    try:
        grid = GridSpec(img.width)
    except ParameterError as exc:
        raise IngestionError(str(exc)) from exc
    values = scale * img.pixels.T.astype(np.float64)
    return apply_taper(ScalarField(grid, values), taper_width)


def field_to_image(f: ScalarField, mode: str = "absolute",
                   scale: float = STREAM_SCALE) -> IntensityImage:
    """Render a field as 8-bit intensities.

    absolute: invert the ingestion scaling, clamp to [0, 255] (reproducible
    rounding: floor(clamp(v)/scale + 0.5)).  minmax: map [min, max] linearly
    onto [0, 255] with floor rounding; constant fields map to mid-gray 128.
    """
    v = f.values.T  # back to row-major image layout
    if mode == "absolute":
        px = np.floor(np.clip(v, 0.0, 255.0 * scale) / scale + 0.5)
    elif mode == "minmax":
        lo, hi = float(v.min()), float(v.max())
        if hi == lo:
            px = np.full_like(v, 128.0)
        else:
            px = np.floor((v - lo) / (hi - lo) * 255.0)
    else:
        raise ParameterError(f"unknown render mode {mode!r}")
    return IntensityImage.from_array(np.clip(px, 0, 255).astype(np.uint8))
