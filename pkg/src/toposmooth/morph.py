"""Dilation and erosion by Euclidean discs, derived from the distance transform.

A point is within the dilation of radius r exactly when its squared
distance to the nearest object pixel is at most r^2; no structuring
element is ever materialized. Erosion is the dual under the convention
that everything outside the image window is background, so objects
touching the border erode there.
"""

from __future__ import annotations

import numpy as np

from .edt import edt_squared
from .grid import as_binary, complement


def _check_radius(r) -> int:
    r = int(r)
    if r < 0:
        raise ValueError("ball radius must be >= 0")
    return r


def _border_distances_sq(shape) -> np.ndarray:
    """Squared distance from each pixel to the nearest point outside the window."""
    h, w = shape
    i = np.arange(h, dtype=np.int64)[:, None]
    j = np.arange(w, dtype=np.int64)[None, :]
    ring = np.minimum(np.minimum(i + 1, h - i), np.minimum(j + 1, w - j))
    return ring * ring


def background_distances(img, workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Squared distance to the nearest background pixel, window exterior included.

    Zero exactly on background pixels; doubles as the removal priority for
    thinning, where points closest to the background fall first.
    """
    pix = as_binary(img)
    d = edt_squared(complement(pix), workers, scheduler)
    return np.minimum(d, _border_distances_sq(pix.shape))


def dilate(img, r, workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Union of Euclidean discs of radius r around the object pixels."""
    r = _check_radius(r)
    pix = as_binary(img)
    return (edt_squared(pix, workers, scheduler) <= r * r).astype(np.uint8)


def erode(img, r, workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Pixels whose whole disc of radius r lies inside the object.

    Dual of dilation applied to the background, with the window exterior
    counting as background.
    """
    r = _check_radius(r)
    return (background_distances(img, workers, scheduler) > r * r).astype(np.uint8)
