"""Topology-preserving smoothing of binary images.

The filter alternates a homotopic cutting (a topology-preserving analogue
of the morphological opening) and a homotopic filling (analogue of the
closing) at radii 1..r_max. Each half builds an erosion or dilation bound
from the exact distance transform and reaches it only through simple-point
removals or additions, so the object and background component counts never
change. Optional constraint images pin pixels that must stay object
(`keep`) or stay background (`avoid`).

Each half-step needs two elementwise maps (the bound mask and the removal
priority); they are fused into single row-parallel kernels because at
512x512 the pipeline is otherwise dominated by intermediate array passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sched
from ._jit import njit
from .edt import _edt_prepared
from .grid import ADJ_84, Adjacency, as_binary
from .morph import _check_radius
from .sched import SCHEDULERS
from .topo import _simple_lut, _thicken_prepared, _thin_engine


@dataclass(frozen=True)
class SmoothingConfig:
    """Filter order, constraint sets, adjacency, and execution parameters."""

    r_max: int
    adj: Adjacency = ADJ_84
    keep: np.ndarray | None = None
    avoid: np.ndarray | None = None
    workers: int = 1
    scheduler: str = "nps"


def _check_cfg(cfg: SmoothingConfig) -> None:
    _check_radius(cfg.r_max)
    if cfg.workers < 1:
        raise ValueError("workers must be >= 1")
    if cfg.scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {cfg.scheduler!r}")


@njit(nogil=True, cache=True)
def _thin_prepare_kernel(padded, dist_bg, keep, rsq, lut, rows,
                         floor, priority, code, cand):  # pragma: no cover
    # one row pass prepares everything the thinning engine needs:
    #   priority = squared distance to the background, window exterior included
    #   floor    = pixels the thinning must keep (erosion of radius r + constraint)
    #   code     = 8-bit neighbor configuration
    #   cand     = destructible pixels (object, outside floor, simple)
    h, w = dist_bg.shape
    for k in range(rows.size):
        r = rows[k]
        pr = r + 1
        rb = r + 1 if r + 1 < h - r else h - r
        for c in range(w):
            pc = c + 1
            cb = c + 1 if c + 1 < w - c else w - c
            b = rb if rb < cb else cb
            p = dist_bg[r, c]
            if b * b < p:
                p = b * b
            priority[r, c] = p
            blocked = 1 if (p > rsq or keep[r, c] == 1) else 0
            floor[r, c] = blocked
            v = (padded[pr - 1, pc - 1]
                 | (padded[pr - 1, pc] << 1)
                 | (padded[pr - 1, pc + 1] << 2)
                 | (padded[pr, pc - 1] << 3)
                 | (padded[pr, pc + 1] << 4)
                 | (padded[pr + 1, pc - 1] << 5)
                 | (padded[pr + 1, pc] << 6)
                 | (padded[pr + 1, pc + 1] << 7))
            code[r, c] = np.uint8(v)
            if padded[pr, pc] == 1 and blocked == 0 and lut[v] == 1:
                cand[r, c] = 1
            else:
                cand[r, c] = 0


@njit(nogil=True, cache=True)
def _cap_kernel(dist_to_obj, mask, want, rsq, rows, cap):  # pragma: no cover
    # cap = pixels the thickening may reach: the dilation of radius r
    # intersected with {mask == want}
    w = dist_to_obj.shape[1]
    for k in range(rows.size):
        r = rows[k]
        for c in range(w):
            if dist_to_obj[r, c] <= rsq and mask[r, c] == want:
                cap[r, c] = 1
            else:
                cap[r, c] = 0


def _run_rows(kernel_call, h, workers, scheduler):
    sched.run_groups(sched.make_groups(h, workers, scheduler), kernel_call, workers)


def _constrained_thin(pix, keep, rsq, adj, workers, scheduler) -> np.ndarray:
    """Thin toward the radius-r erosion united with `keep`, peeling in
    increasing distance to the background."""
    h, w = pix.shape
    lut = _simple_lut(adj)
    dist_bg = _edt_prepared(pix, workers, scheduler, invert=True)
    padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = pix
    floor = np.empty((h, w), dtype=np.uint8)
    priority = np.empty((h, w), dtype=np.int64)
    code = np.empty((h, w), dtype=np.uint8)
    cand = np.empty((h, w), dtype=np.uint8)
    _run_rows(lambda rows: _thin_prepare_kernel(padded, dist_bg, keep, rsq, lut, rows,
                                                floor, priority, code, cand),
              h, workers, scheduler)
    out = pix.copy()
    _thin_engine(out, code, floor, priority, lut, np.flatnonzero(cand), -1)
    return out


def _cutting(pix, keep, r, adj, workers, scheduler) -> np.ndarray:
    h, w = pix.shape
    rsq = r * r
    thinned = _constrained_thin(pix, keep, rsq, adj, workers, scheduler)
    dist_y = _edt_prepared(thinned, workers, scheduler)
    cap = np.empty((h, w), dtype=np.uint8)
    _run_rows(lambda rows: _cap_kernel(dist_y, pix, np.uint8(1), rsq, rows, cap),
              h, workers, scheduler)
    return _thicken_prepared(thinned, cap, dist_y, adj, None, workers, scheduler)


def _filling(pix, avoid, r, adj, workers, scheduler) -> np.ndarray:
    h, w = pix.shape
    rsq = r * r
    dist_x = _edt_prepared(pix, workers, scheduler)
    cap = np.empty((h, w), dtype=np.uint8)
    _run_rows(lambda rows: _cap_kernel(dist_x, avoid, np.uint8(0), rsq, rows, cap),
              h, workers, scheduler)
    thickened = _thicken_prepared(pix, cap, dist_x, adj, None, workers, scheduler)
    return _constrained_thin(thickened, pix, rsq, adj, workers, scheduler)


def homotopic_cutting(img, keep, r, adj: Adjacency = ADJ_84,
                      workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Topology-preserving pruning of everything the eroded image cannot carry.

    Thins toward erode(img, r) united with `keep`, then grows back inside
    dilate(thinned, r) intersected with the original. The result R
    satisfies keep <= R <= img and has the topology of img. Radius 0 is
    the identity.
    """
    pix = as_binary(img)
    keep = as_binary(keep)
    r = _check_radius(r)
    if keep.shape != pix.shape:
        raise ValueError(f"constraint shape {keep.shape} != image shape {pix.shape}")
    if np.any(keep & (pix ^ 1)):
        raise ValueError("keep-constraint pixels must be object pixels")
    return _cutting(pix, keep, r, adj, workers, scheduler)


def homotopic_filling(img, avoid, r, adj: Adjacency = ADJ_84,
                      workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Topology-preserving filling of everything the dilated image can carry.

    Thickens inside dilate(img, r) minus `avoid`, then thins back toward
    erode(thickened, r) united with the original. The result R satisfies
    img <= R <= complement(avoid) and has the topology of img. Dual of
    homotopic_cutting under complementation of the plane.
    """
    pix = as_binary(img)
    avoid = as_binary(avoid)
    r = _check_radius(r)
    if avoid.shape != pix.shape:
        raise ValueError(f"constraint shape {avoid.shape} != image shape {pix.shape}")
    if np.any(avoid & pix):
        raise ValueError("avoid-constraint pixels must be background pixels")
    return _filling(pix, avoid, r, adj, workers, scheduler)


def hasf(img, cfg: SmoothingConfig) -> np.ndarray:
    """Alternate cutting and filling at radii 1..r_max.

    Component counts of the object (under cfg.adj.fg) and of the
    background (under cfg.adj.bg, window exterior attached) are preserved
    end to end; constraint sets are validated against the input once and
    stay inside the result by the sandwich bounds of each half.
    """
    pix = as_binary(img)
    _check_cfg(cfg)
    keep = np.zeros_like(pix) if cfg.keep is None else as_binary(cfg.keep)
    avoid = np.zeros_like(pix) if cfg.avoid is None else as_binary(cfg.avoid)
    if keep.shape != pix.shape or avoid.shape != pix.shape:
        raise ValueError("constraint images must match the input shape")
    if np.any(keep & avoid):
        raise ValueError("keep and avoid constraints overlap")
    if np.any(keep & (pix ^ 1)):
        raise ValueError("keep-constraint pixels must be object pixels")
    if np.any(avoid & pix):
        raise ValueError("avoid-constraint pixels must be background pixels")

    out = pix
    for r in range(1, cfg.r_max + 1):
        out = _cutting(out, keep, r, cfg.adj, cfg.workers, cfg.scheduler)
        out = _filling(out, avoid, r, cfg.adj, cfg.workers, cfg.scheduler)
    return out


def smooth(img, r_max: int, workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Unconstrained smoothing: one knob, r_max, controls the degree."""
    return hasf(img, SmoothingConfig(r_max=r_max, workers=workers, scheduler=scheduler))
