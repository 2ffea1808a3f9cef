"""Readers and writers for signature images.

Supported inputs: binary PGM (P5, maxval <= 255) and PNG.  8-bit grayscale
PNGs load directly; paletted/RGB/RGBA PNGs are reduced with the standard
ITU-R 601 luma weighting before thresholding.  Debug dumps from the CLI are
written as P5 (grayscale) or P4 (bitmap) PNM files.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .errors import FormatError
from .imaging import BinaryImage, GrayImage, as_gray


def _read_pnm_header(data: bytes, offset: int, fields: int) -> tuple[list[int], int]:
    """Parse whitespace/comment separated decimal header fields."""
    values: list[int] = []
    i = offset
    while len(values) < fields:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < len(data) and not data[i : i + 1].isspace():
            i += 1
        token = data[start:i]
        if not token.isdigit():
            raise FormatError(f"malformed PNM header token {token!r}")
        values.append(int(token))
    if i >= len(data) or not data[i : i + 1].isspace():
        raise FormatError("PNM header not terminated by whitespace")
    return values, i + 1


def read_pgm(data: bytes) -> GrayImage:
    """Decode a binary PGM (P5) or PBM (P4) buffer to a uint8 grayscale array."""
    if data[:2] == b"P5":
        (w, h, maxval), start = _read_pnm_header(data, 2, 3)
        if maxval <= 0 or maxval > 255:
            raise FormatError(f"only 8-bit PGM supported, maxval={maxval}")
        expected = w * h
        raster = data[start : start + expected]
        if len(raster) < expected:
            raise FormatError("PGM raster truncated")
        return np.frombuffer(raster, dtype=np.uint8).reshape(h, w).copy()
    if data[:2] == b"P4":
        (w, h), start = _read_pnm_header(data, 2, 2)
        row_bytes = (w + 7) // 8
        expected = row_bytes * h
        raster = data[start : start + expected]
        if len(raster) < expected:
            raise FormatError("PBM raster truncated")
        rows = np.frombuffer(raster, dtype=np.uint8).reshape(h, row_bytes)
        bits = np.unpackbits(rows, axis=1)[:, :w].astype(bool)
        # PBM bit 1 = black = ink; render ink as 0 so thresholding recovers it
        return np.where(bits, 0, 255).astype(np.uint8)
    raise FormatError(f"unsupported PNM magic {data[:2]!r}")


def read_image(path) -> GrayImage:
    """Load a signature scan (PGM or PNG) as a grayscale uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P5", b"P4"):
        return read_pgm(data)
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception as exc:
        raise FormatError(f"cannot decode image {path}: {exc}") from exc
    if img.mode in ("I", "I;16", "I;16B", "F"):
        raise FormatError(f"{path}: only 8-bit images are supported, mode={img.mode}")
    if img.mode != "L":
        img = img.convert("L")
    return as_gray(np.asarray(img, dtype=np.uint8))


def write_pgm(img: GrayImage, path) -> None:
    """Write a uint8 grayscale array as binary PGM (P5)."""
    img = as_gray(img)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def write_pbm(bits: BinaryImage, path) -> None:
    """Write a bool array as binary PBM (P4); True pixels come out black."""
    arr = np.asarray(bits, dtype=bool)
    h, w = arr.shape
    packed = np.packbits(arr, axis=1)
    with open(path, "wb") as fh:
        fh.write(f"P4\n{w} {h}\n".encode("ascii"))
        fh.write(packed.tobytes())


def write_png(img: GrayImage, path) -> None:
    """Write a uint8 grayscale array as an 8-bit grayscale PNG."""
    Image.fromarray(as_gray(img), mode="L").save(path, format="PNG")


def binary_to_gray(bits: BinaryImage, ink: int = 0, paper: int = 255) -> GrayImage:
    """Render a binary image to grayscale for dumps (ink dark by default)."""
    arr = np.asarray(bits, dtype=bool)
    return np.where(arr, np.uint8(ink), np.uint8(paper))
