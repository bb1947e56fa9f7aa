"""MSI container and 8-bit PNG interchange.

MSI layout::

    b"MSI1" | uint32 LE header length | UTF-8 JSON header | float64 LE payload (BSQ)
"""

from __future__ import annotations

import json
import os
import struct
import zlib

import numpy as np
from PIL import Image

from .errors import FormatError, UnsupportedFormatError
from .raster import Raster

MAGIC = b"MSI1"
_PREFIX = 8


def encode_container(r: Raster) -> bytes:
    header = {
        "width": r.width,
        "height": r.height,
        "bands": r.bands,
        "dtype": "f64",
        "layout": "BSQ",
        "nominal_range": list(r.nominal_range),
    }
    if r.band_names is not None:
        header["band_names"] = list(r.band_names)
    hdr = json.dumps(header, separators=(",", ":"), sort_keys=True).encode("utf-8")
    payload = r.data.astype("<f8", copy=False).tobytes()
    return MAGIC + struct.pack("<I", len(hdr)) + hdr + payload


def decode_container(buf: bytes) -> Raster:
    if len(buf) < _PREFIX:
        raise FormatError(f"file too short for MSI prefix: need {_PREFIX} bytes, got {len(buf)}", len(buf))
    if buf[:4] != MAGIC:
        raise FormatError(f"bad magic {buf[:4]!r}, expected {MAGIC!r}", 0)
    (hlen,) = struct.unpack("<I", buf[4:8])
    if _PREFIX + hlen > len(buf):
        raise FormatError(f"header length {hlen} exceeds file size {len(buf)}", 4)
    try:
        header = json.loads(buf[_PREFIX:_PREFIX + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable header: {exc}", _PREFIX) from None
    if not isinstance(header, dict):
        raise FormatError("header is not a JSON object", _PREFIX)

    try:
        w, h, nb = (int(header[k]) for k in ("width", "height", "bands"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"header missing or invalid dimension field: {exc}", _PREFIX) from None
    if min(w, h, nb) < 1:
        raise FormatError(f"header dimensions must be >= 1, got {w}x{h}x{nb}", _PREFIX)
    if header.get("dtype", "f64") != "f64":
        raise FormatError(f"unsupported dtype {header.get('dtype')!r}", _PREFIX)
    if header.get("layout", "BSQ") != "BSQ":
        raise FormatError(f"unsupported layout {header.get('layout')!r}", _PREFIX)

    start = _PREFIX + hlen
    expected = w * h * nb * 8
    got = len(buf) - start
    if got != expected:
        raise FormatError(f"payload length mismatch: expected {expected} bytes, got {got}", start)
    data = np.frombuffer(buf, dtype="<f8", count=w * h * nb, offset=start)
    bad = np.flatnonzero(~np.isfinite(data))
    if bad.size:
        raise FormatError("non-finite sample in payload", start + 8 * int(bad[0]))

    rng = header.get("nominal_range", [0.0, 255.0])
    return Raster(
        data.astype(np.float64).reshape(nb, h, w),
        header.get("band_names"),
        (float(rng[0]), float(rng[1])),
    )


def write_container(r: Raster, path) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_container(r))


def read_container(path) -> Raster:
    with open(path, "rb") as fh:
        return decode_container(fh.read())


def payload_crc32(r: Raster) -> str:
    """CRC-32 of the little-endian sample payload, as 8 hex digits."""
    return f"{zlib.crc32(r.data.astype('<f8', copy=False).tobytes()) & 0xFFFFFFFF:08x}"


def import_png(path) -> Raster:
    with Image.open(path) as img:
        if img.mode == "L":
            arr = np.asarray(img, dtype=np.float64)[np.newaxis]
        elif img.mode == "RGB":
            arr = np.moveaxis(np.asarray(img, dtype=np.float64), -1, 0)
        else:
            raise UnsupportedFormatError(
                f"only 8-bit gray or RGB PNG is supported, got mode {img.mode!r}"
            )
    return Raster(arr)


def export_png(r: Raster, path) -> None:
    if r.bands not in (1, 3):
        raise UnsupportedFormatError(f"PNG export needs 1 or 3 bands, got {r.bands}")
    q = np.clip(np.floor(r.data + 0.5), 0, 255).astype(np.uint8)
    if r.bands == 1:
        img = Image.fromarray(q[0])
    else:
        img = Image.fromarray(np.ascontiguousarray(np.moveaxis(q, 0, -1)))
    img.save(path, format="PNG")


def load(path) -> Raster:
    """Read a raster, choosing the decoder from the file extension."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".png":
        return import_png(path)
    if ext == ".msi":
        return read_container(path)
    raise UnsupportedFormatError(f"unknown raster extension {ext!r} (expected .msi or .png)")


def save(r: Raster, path) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".png":
        export_png(r, path)
    elif ext == ".msi":
        write_container(r, path)
    else:
        raise UnsupportedFormatError(f"unknown raster extension {ext!r} (expected .msi or .png)")
