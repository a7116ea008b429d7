"""Binary image primitives: pixel grids, neighborhoods, connected components.

A binary image is a 2D uint8 array of {0, 1} values, 1 being an object
pixel. Everything outside the array is treated as background, which makes
border behavior of all downstream operators deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

_N4_OFFSETS = ((-1, 0), (0, -1), (0, 1), (1, 0))
_N8_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))

_STRUCT_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCT_8 = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class Adjacency:
    """Complementary connectivity pair: `fg` for object pixels, `bg` for background.

    Only (8, 4) and (4, 8) are consistent choices in 2D, so `bg` is derived.
    """

    fg: int = 8

    def __post_init__(self):
        if self.fg not in (4, 8):
            raise ValueError(f"foreground adjacency must be 4 or 8, got {self.fg}")

    @property
    def bg(self) -> int:
        return 12 - self.fg

    def dual(self) -> "Adjacency":
        """The pair seen from the background's point of view."""
        return Adjacency(self.bg)


ADJ_84 = Adjacency(8)
ADJ_48 = Adjacency(4)


def as_binary(img) -> np.ndarray:
    """Validate and normalize an array to a {0,1} uint8 image.

    Raises ValueError for anything that is not a 2D array of 0/1 values
    with positive dimensions.
    """
    arr = np.asarray(img)
    if arr.dtype == bool:
        arr = arr.astype(np.uint8)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a 2D image with positive dimensions, got shape {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    if arr.max(initial=0) > 1:
        raise ValueError("binary image pixels must be 0 or 1")
    return arr


def complement(img) -> np.ndarray:
    """Pixel-wise negation. An involution: complement(complement(x)) == x."""
    return as_binary(img) ^ 1


def neighbors(p, shape, n: int = 8) -> list[tuple[int, int]]:
    """In-bounds 4- or 8-neighbors of point p = (row, col), p excluded.

    p itself must lie inside the image; out-of-bounds p is a contract
    violation and raises ValueError.
    """
    r, c = p
    h, w = shape
    if not (0 <= r < h and 0 <= c < w):
        raise ValueError(f"point {p!r} outside {h}x{w} image")
    if n == 4:
        offsets = _N4_OFFSETS
    elif n == 8:
        offsets = _N8_OFFSETS
    else:
        raise ValueError(f"adjacency must be 4 or 8, got {n}")
    return [
        (r + dr, c + dc)
        for dr, dc in offsets
        if 0 <= r + dr < h and 0 <= c + dc < w
    ]


def connected_components(img, n: int = 8, foreground: bool = True):
    """Label maximal n-connected components of the object (or background) pixels.

    Returns (count, labels) where labels is an int array of the image's
    shape, 0 on pixels outside the selected set and 1..count on it.
    """
    arr = as_binary(img)
    if not foreground:
        arr = arr ^ 1
    if n == 4:
        structure = _STRUCT_4
    elif n == 8:
        structure = _STRUCT_8
    else:
        raise ValueError(f"adjacency must be 4 or 8, got {n}")
    labels, count = ndimage.label(arr, structure=structure)
    return int(count), labels


def component_count(img, n: int = 8, foreground: bool = True) -> int:
    return connected_components(img, n, foreground)[0]


def background_component_count(img, n: int = 4) -> int:
    """Components of the background of a finite object, window exterior included.

    The background of a finite pixel set extends past the image window, so
    regions that touch the border are all connected through the outside.
    Counted by attaching one background ring before labeling; this is the
    quantity homotopic operators leave invariant, together with the object
    component count.
    """
    pix = as_binary(img)
    padded = np.zeros((pix.shape[0] + 2, pix.shape[1] + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = pix
    return connected_components(padded, n, foreground=False)[0]
