"""Reading and writing netpbm images: PBM (P1/P4) and PGM (P2/P5).

PBM value 1 (black) maps to the object. P4 rasters are bit-packed MSB
first with rows padded to a byte boundary; padding bits are ignored on
read and zeroed on write. Header comments (# to end of line) are
honored. Parse errors carry the byte offset at which they occurred.
"""

from __future__ import annotations

import numpy as np

from .grid import as_binary

_WS = b" \t\r\n\x0b\x0c"


class NetpbmError(ValueError):
    pass


class _Cursor:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_filler(self) -> None:
        data = self.data
        n = len(data)
        while self.pos < n:
            ch = data[self.pos]
            if ch == 0x23:  # '#': comment runs to end of line
                while self.pos < n and data[self.pos] not in (0x0A, 0x0D):
                    self.pos += 1
            elif ch in _WS:
                self.pos += 1
            else:
                return

    def token(self, what: str) -> bytes:
        self._skip_filler()
        if self.pos >= len(self.data):
            raise NetpbmError(f"unexpected end of file at byte {self.pos} while reading {what}")
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos] not in _WS \
                and self.data[self.pos] != 0x23:
            self.pos += 1
        return self.data[start:self.pos]

    def int_token(self, what: str) -> int:
        start = self.pos
        tok = self.token(what)
        try:
            value = int(tok)
        except ValueError:
            raise NetpbmError(f"expected integer {what} at byte {start}, got {tok!r}") from None
        return value


def _read_dims(cur: _Cursor):
    w = cur.int_token("width")
    h = cur.int_token("height")
    if w < 1 or h < 1:
        raise NetpbmError(f"non-positive dimensions {w}x{h} in header (byte {cur.pos})")
    return h, w


def read_pbm(path) -> np.ndarray:
    """Parse a P1 or P4 file into a {0,1} image, 1 = black = object."""
    with open(path, "rb") as fh:
        data = fh.read()
    cur = _Cursor(data)
    magic = cur.token("magic number")
    if magic not in (b"P1", b"P4"):
        raise NetpbmError(f"unsupported magic {magic!r} at byte 0; expected P1 or P4")
    h, w = _read_dims(cur)
    if magic == b"P1":
        pixels = np.empty(h * w, dtype=np.uint8)
        count = 0
        while count < h * w:
            cur._skip_filler()
            if cur.pos >= len(data):
                raise NetpbmError(
                    f"truncated raster at byte {cur.pos}: got {count} of {h * w} pixels")
            ch = data[cur.pos]
            if ch == 0x30:
                pixels[count] = 0
            elif ch == 0x31:
                pixels[count] = 1
            else:
                raise NetpbmError(f"invalid raster character {chr(ch)!r} at byte {cur.pos}")
            count += 1
            cur.pos += 1
        return pixels.reshape(h, w)
    # P4: exactly one whitespace byte after the header, then packed rows
    if cur.pos >= len(data) or data[cur.pos] not in _WS:
        raise NetpbmError(f"missing raster separator at byte {cur.pos}")
    cur.pos += 1
    row_bytes = (w + 7) // 8
    need = row_bytes * h
    raster = data[cur.pos:cur.pos + need]
    if len(raster) < need:
        raise NetpbmError(
            f"truncated raster at byte {cur.pos + len(raster)}: "
            f"got {len(raster)} of {need} bytes")
    packed = np.frombuffer(raster, dtype=np.uint8).reshape(h, row_bytes)
    bits = np.unpackbits(packed, axis=1)[:, :w]
    return np.ascontiguousarray(bits)


def write_pbm(img, path, format: str = "P4") -> None:
    """Write a binary image as P1 (plain) or P4 (packed)."""
    pix = as_binary(img)
    h, w = pix.shape
    header = f"{format}\n{w} {h}\n".encode("ascii")
    if format == "P1":
        with open(path, "wb") as fh:
            fh.write(header)
            for row in pix:
                text = " ".join(str(int(v)) for v in row)
                for start in range(0, len(text), 68):
                    fh.write(text[start:start + 68].encode("ascii") + b"\n")
    elif format == "P4":
        packed = np.packbits(pix, axis=1)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(packed.tobytes())
    else:
        raise ValueError(f"PBM format must be 'P1' or 'P4', got {format!r}")


def write_pgm(values, path, mode: str = "root", format: str = "P5") -> None:
    """Render a squared-distance map as a grayscale PGM.

    mode "squared" keeps the raw squared values (maxval = largest finite
    value, capped at 65535); mode "root" writes round(sqrt(value)) clamped
    to 255. The distance sentinel of object-free images renders as maxval
    in both modes.
    """
    arr = np.ascontiguousarray(values, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("distance map must be 2D")
    h, w = arr.shape
    sentinel = h * h + w * w + 1
    finite = arr[arr < sentinel]
    if mode == "squared":
        maxval = int(min(max(int(finite.max()) if finite.size else 1, 1), 65535))
        out = np.minimum(arr, maxval)
    elif mode == "root":
        maxval = 255
        root = np.rint(np.sqrt(arr.astype(np.float64))).astype(np.int64)
        out = np.minimum(root, 255)
        out[arr >= sentinel] = 255
    else:
        raise ValueError(f"PGM mode must be 'squared' or 'root', got {mode!r}")
    header = f"{format}\n{w} {h}\n{maxval}\n".encode("ascii")
    if format == "P2":
        with open(path, "wb") as fh:
            fh.write(header)
            for row in out:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode("ascii"))
    elif format == "P5":
        dtype = ">u2" if maxval > 255 else np.uint8
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(out.astype(dtype).tobytes())
    else:
        raise ValueError(f"PGM format must be 'P2' or 'P5', got {format!r}")


def read_pgm(path) -> np.ndarray:
    """Parse a P2 or P5 file into an integer array (round-trip helper)."""
    with open(path, "rb") as fh:
        data = fh.read()
    cur = _Cursor(data)
    magic = cur.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise NetpbmError(f"unsupported magic {magic!r} at byte 0; expected P2 or P5")
    h, w = _read_dims(cur)
    maxval = cur.int_token("maxval")
    if not 0 < maxval < 65536:
        raise NetpbmError(f"maxval {maxval} out of range at byte {cur.pos}")
    if magic == b"P2":
        values = np.empty(h * w, dtype=np.int64)
        for i in range(h * w):
            values[i] = cur.int_token("pixel")
        return values.reshape(h, w)
    if cur.pos >= len(data) or data[cur.pos] not in _WS:
        raise NetpbmError(f"missing raster separator at byte {cur.pos}")
    cur.pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    need = h * w * dtype.itemsize
    raster = data[cur.pos:cur.pos + need]
    if len(raster) < need:
        raise NetpbmError(
            f"truncated raster at byte {cur.pos + len(raster)}: "
            f"got {len(raster)} of {need} bytes")
    return np.frombuffer(raster, dtype=dtype).reshape(h, w).astype(np.int64)
