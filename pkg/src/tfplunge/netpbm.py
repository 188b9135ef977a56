"""Minimal Netpbm reader/writer: PBM (P1/P4), PGM (P2/P5) and PPM (P3/P6)."""

from __future__ import annotations

import os

import numpy as np


class NetpbmError(ValueError):
    pass


def _tokens(data: bytes, pos: int, count: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated integers, skipping ``#`` comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise NetpbmError(f"malformed header near byte {start}")
        out.append(int(data[start:pos]))
    return out, pos


def read(path: str | os.PathLike) -> tuple[str, np.ndarray, int]:
    """Read a Netpbm file; returns ``(magic, pixels, maxval)``.

    PBM pixels are booleans with True meaning black (set). PPM pixels have a
    trailing channel axis of length 3.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2].decode("ascii", errors="replace")
    if magic not in ("P1", "P2", "P3", "P4", "P5", "P6"):
        raise NetpbmError(f"unsupported or missing magic number {magic!r}")
    bitmap = magic in ("P1", "P4")
    (width, height), pos = _tokens(data, 2, 2)
    if width <= 0 or height <= 0:
        raise NetpbmError(f"non-positive dimensions {width}x{height}")
    maxval = 1
    if not bitmap:
        (maxval,), pos = _tokens(data, pos, 1)
        if not 0 < maxval < 65536:
            raise NetpbmError(f"invalid maxval {maxval}")
    channels = 3 if magic in ("P3", "P6") else 1
    count = width * height * channels

    if magic in ("P1", "P2", "P3"):
        if magic == "P1":
            # Bits may be packed without separators.
            body = bytes(c for c in data[pos:] if c in b"01")
            if len(body) < count:
                raise NetpbmError("truncated PBM data")
            values = np.frombuffer(body[:count], dtype=np.uint8) - ord("0")
        else:
            values, _ = _tokens(data, pos, count)
            values = np.array(values)
    else:
        pos += 1  # single whitespace byte after the header
        if magic == "P4":
            row_bytes = (width + 7) // 8
            raw = np.frombuffer(data[pos : pos + row_bytes * height], dtype=np.uint8)
            if raw.size < row_bytes * height:
                raise NetpbmError("truncated PBM data")
            bits = np.unpackbits(raw.reshape(height, row_bytes), axis=1)[:, :width]
            return magic, bits.astype(bool), 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        nbytes = count * dtype.itemsize
        if len(data) - pos < nbytes:
            raise NetpbmError("truncated raster data")
        values = np.frombuffer(data[pos : pos + nbytes], dtype=dtype)

    shape = (height, width, 3) if channels == 3 else (height, width)
    pixels = np.asarray(values).reshape(shape)
    if bitmap:
        return magic, pixels.astype(bool), 1
    if np.any(pixels > maxval):
        raise NetpbmError("sample exceeds maxval")
    return magic, pixels.astype(np.uint16 if maxval > 255 else np.uint8), maxval


def write_pbm(path: str | os.PathLike, bits: np.ndarray, binary: bool = True) -> None:
    bits = np.asarray(bits, dtype=bool)
    h, w = bits.shape
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P4\n{w} {h}\n".encode())
            fh.write(np.packbits(bits, axis=1).tobytes())
        else:
            fh.write(f"P1\n{w} {h}\n".encode())
            for row in bits.astype(np.uint8):
                fh.write((" ".join(map(str, row)) + "\n").encode())


def write_pgm(path: str | os.PathLike, gray: np.ndarray, maxval: int = 255, binary: bool = True) -> None:
    gray = np.asarray(gray)
    h, w = gray.shape
    with open(path, "wb") as fh:
        fh.write(f"{'P5' if binary else 'P2'}\n{w} {h}\n{maxval}\n".encode())
        if binary:
            dtype = ">u2" if maxval > 255 else np.uint8
            fh.write(gray.astype(dtype).tobytes())
        else:
            for row in gray:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode())


def write_ppm(path: str | os.PathLike, rgb: np.ndarray) -> None:
    """Write an ``(H, W, 3)`` uint8 image as binary PPM (P6)."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got {rgb.shape}")
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(np.ascontiguousarray(rgb).tobytes())
