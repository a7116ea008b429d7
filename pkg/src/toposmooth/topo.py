"""Local topology: connectivity numbers, simple points, homotopic thin/thicken.

Every pixel's 8-neighborhood is encoded as an 8-bit mask (bit k set when
the neighbor at _OFFSETS[k] is an object pixel; out-of-bounds reads as
background). Connectivity numbers come from two 256-entry tables built at
import time:

  T  = number of fg-connected components of the object neighbors that are
       fg-adjacent to the center,
  T' = the same for background neighbors under the complementary adjacency.

A pixel is simple exactly when T == 1 and T' == 1: flipping it then
neither splits, merges, creates nor deletes a component of the object or
of the background.

The thinning engine keeps two containers: a candidate queue ordered by
(priority, row-major index), so points fall in increasing distance to the
background, and a plain stack of just-removed points whose neighbors are
re-queued once the candidate queue drains. Each pop is revalidated
against the current image before removal, so a round terminates only when
no removable point is left. Thickening is thinning of the complement
under the dual adjacency.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import sched
from ._jit import njit
from .grid import ADJ_84, Adjacency, as_binary

_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_EDGE_BITS = frozenset(k for k, (dr, dc) in enumerate(_OFFSETS) if abs(dr) + abs(dc) == 1)

_OFF_R = np.array([o[0] for o in _OFFSETS], dtype=np.int64)
_OFF_C = np.array([o[1] for o in _OFFSETS], dtype=np.int64)
# bit of p in the code of its neighbor along direction k (the opposite direction)
_FLIP = np.array([1 << (7 - k) for k in range(8)], dtype=np.uint8)


def _count_components(mask: int, conn: int) -> int:
    """Components of the set bits under `conn`, restricted to those conn-adjacent
    to the (implicit) center cell. Every bit is 8-adjacent to the center, so the
    restriction only bites for conn == 4."""
    cells = [k for k in range(8) if (mask >> k) & 1]
    seen = set()
    count = 0
    for start in cells:
        if start in seen:
            continue
        stack = [start]
        comp = set()
        while stack:
            a = stack.pop()
            if a in comp:
                continue
            comp.add(a)
            ra, ca = _OFFSETS[a]
            for b in cells:
                if b in comp:
                    continue
                rb, cb = _OFFSETS[b]
                dr, dc = abs(ra - rb), abs(ca - cb)
                if conn == 4:
                    adjacent = dr + dc == 1
                else:
                    adjacent = max(dr, dc) == 1
                if adjacent:
                    stack.append(b)
        seen |= comp
        if conn == 8 or comp & _EDGE_BITS:
            count += 1
    return count


T8_TABLE = np.array([_count_components(m, 8) for m in range(256)], dtype=np.uint8)
T4_TABLE = np.array([_count_components(m, 4) for m in range(256)], dtype=np.uint8)

_BG = np.arange(256) ^ 0xFF
SIMPLE_84 = ((T8_TABLE == 1) & (T4_TABLE[_BG] == 1)).astype(np.uint8)
SIMPLE_48 = ((T4_TABLE == 1) & (T8_TABLE[_BG] == 1)).astype(np.uint8)


def _simple_lut(adj: Adjacency) -> np.ndarray:
    return SIMPLE_84 if adj.fg == 8 else SIMPLE_48


class TopoClassification(NamedTuple):
    fg_components: int
    bg_components: int
    simple: bool


def neighborhood_codes(img) -> np.ndarray:
    """Per-pixel 8-bit mask of object neighbors, vectorized over the image."""
    pix = as_binary(img)
    h, w = pix.shape
    padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = pix
    code = np.zeros((h, w), dtype=np.uint8)
    for k, (dr, dc) in enumerate(_OFFSETS):
        code |= padded[1 + dr:1 + dr + h, 1 + dc:1 + dc + w] << np.uint8(k)
    return code


def _code_at(pix, r, c) -> int:
    h, w = pix.shape
    code = 0
    for k, (dr, dc) in enumerate(_OFFSETS):
        nr, nc = r + dr, c + dc
        if 0 <= nr < h and 0 <= nc < w and pix[nr, nc]:
            code |= 1 << k
    return code


def connectivity_numbers(img, p, adj: Adjacency = ADJ_84) -> TopoClassification:
    """Connectivity numbers of p's punctured 3x3 neighborhood.

    fg_components counts object components adjacent to p under adj.fg,
    bg_components counts background components under adj.bg. Both are
    determined by the neighborhood alone; p's own value plays no role.
    """
    pix = as_binary(img)
    r, c = p
    h, w = pix.shape
    if not (0 <= r < h and 0 <= c < w):
        raise ValueError(f"point {p!r} outside {h}x{w} image")
    code = _code_at(pix, r, c)
    if adj.fg == 8:
        t, tbar = int(T8_TABLE[code]), int(T4_TABLE[code ^ 0xFF])
    else:
        t, tbar = int(T4_TABLE[code]), int(T8_TABLE[code ^ 0xFF])
    return TopoClassification(t, tbar, t == 1 and tbar == 1)


def is_simple(img, p, adj: Adjacency = ADJ_84) -> bool:
    """True when flipping p to background leaves the topology unchanged."""
    return connectivity_numbers(img, p, adj).simple


def simple_point_mask(img, adj: Adjacency = ADJ_84) -> np.ndarray:
    """Boolean mask of object pixels that are currently simple."""
    pix = as_binary(img)
    lut = _simple_lut(adj)
    return (pix == 1) & (lut[neighborhood_codes(pix)] == 1)


@njit(cache=True)
def _heap_push(heap, n, key):  # pragma: no cover - exercised via engine
    heap[n] = key
    j = n
    while j > 0:
        parent = (j - 1) >> 1
        if heap[parent] > heap[j]:
            heap[parent], heap[j] = heap[j], heap[parent]
            j = parent
        else:
            break
    return n + 1


@njit(cache=True)
def _heap_pop(heap, n):  # pragma: no cover - exercised via engine
    key = heap[0]
    n -= 1
    heap[0] = heap[n]
    j = 0
    while True:
        left = 2 * j + 1
        right = left + 1
        best = j
        if left < n and heap[left] < heap[best]:
            best = left
        if right < n and heap[right] < heap[best]:
            best = right
        if best == j:
            break
        heap[best], heap[j] = heap[j], heap[best]
        j = best
    return key, n


@njit(nogil=True, cache=True)
def _detect_kernel(padded, blocked, lut, rows, code, cand):  # pragma: no cover
    # one pass per row: assemble the 8-bit neighbor code from the padded
    # image and flag destructible pixels (object, unconstrained, simple)
    w = code.shape[1]
    for k in range(rows.size):
        r = rows[k]
        pr = r + 1
        for c in range(w):
            pc = c + 1
            v = (padded[pr - 1, pc - 1]
                 | (padded[pr - 1, pc] << 1)
                 | (padded[pr - 1, pc + 1] << 2)
                 | (padded[pr, pc - 1] << 3)
                 | (padded[pr, pc + 1] << 4)
                 | (padded[pr + 1, pc - 1] << 5)
                 | (padded[pr + 1, pc] << 6)
                 | (padded[pr + 1, pc + 1] << 7))
            code[r, c] = np.uint8(v)
            if padded[pr, pc] == 1 and blocked[r, c] == 0 and lut[v] == 1:
                cand[r, c] = 1
            else:
                cand[r, c] = 0


@njit(cache=True)
def _thin_engine(pix, code, blocked, priority, lut, cand_idx, max_sweeps):  # pragma: no cover
    # heap keys pack (priority, row-major index) into one int64, so the pop
    # order is exactly increasing priority with row-major tie-breaking
    h, w = pix.shape
    nm = h * w
    heap = np.empty(nm, np.int64)
    in_heap = np.zeros(nm, np.uint8)
    touched = np.empty(nm, np.int64)
    hn = 0
    for t in range(cand_idx.size):
        idx = cand_idx[t]
        r = idx // w
        c = idx - r * w
        hn = _heap_push(heap, hn, priority[r, c] * nm + idx)
        in_heap[idx] = 1
    sweeps = 0
    while hn > 0 and (max_sweeps < 0 or sweeps < max_sweeps):
        top = 0
        while hn > 0:
            key, hn = _heap_pop(heap, hn)
            idx = key % nm
            in_heap[idx] = 0
            r = idx // w
            c = idx - r * w
            if pix[r, c] == 1 and blocked[r, c] == 0 and lut[code[r, c]] == 1:
                pix[r, c] = 0
                for k in range(8):
                    nr = r + _OFF_R[k]
                    nc = c + _OFF_C[k]
                    if 0 <= nr < h and 0 <= nc < w:
                        code[nr, nc] = code[nr, nc] ^ _FLIP[k]
                touched[top] = idx
                top += 1
        while top > 0:
            top -= 1
            idx = touched[top]
            r = idx // w
            c = idx - r * w
            for k in range(8):
                nr = r + _OFF_R[k]
                nc = c + _OFF_C[k]
                if 0 <= nr < h and 0 <= nc < w:
                    nidx = nr * w + nc
                    if in_heap[nidx] == 0 and pix[nr, nc] == 1 and blocked[nr, nc] == 0 and lut[code[nr, nc]] == 1:
                        hn = _heap_push(heap, hn, priority[nr, nc] * nm + nidx)
                        in_heap[nidx] = 1
        sweeps += 1


def _check_thin_args(img, keep, priority):
    pix = as_binary(img)
    keep = as_binary(keep)
    if keep.shape != pix.shape:
        raise ValueError(f"constraint shape {keep.shape} != image shape {pix.shape}")
    if np.any(keep & (pix ^ 1)):
        raise ValueError("constraint pixels must be a subset of the object pixels")
    priority = np.ascontiguousarray(priority, dtype=np.int64)
    if priority.shape != pix.shape:
        raise ValueError(f"priority shape {priority.shape} != image shape {pix.shape}")
    if priority.size:
        lo = int(priority.min())
        hi = int(priority.max())
        if lo < 0 or hi >= (1 << 62) // priority.size:
            raise ValueError("priority values must be non-negative and fit the packed queue key")
    return pix, keep, priority


def _thin_prepared(pix, keep, priority, adj, max_iter, workers, scheduler) -> np.ndarray:
    """Engine driver without argument validation.

    Callers guarantee: matching shapes, {0,1} uint8 images, keep <= pix,
    and non-negative priorities small enough for the packed queue key
    (any squared-distance map qualifies).
    """
    out = pix.copy()
    h, w = out.shape
    padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = out
    lut = _simple_lut(adj)
    code = np.empty((h, w), dtype=np.uint8)
    cand = np.empty((h, w), dtype=np.uint8)
    sched.run_groups(
        sched.make_groups(h, workers, scheduler),
        lambda rows: _detect_kernel(padded, keep, lut, rows, code, cand),
        workers,
    )
    max_sweeps = -1 if max_iter is None else int(max_iter)
    _thin_engine(out, code, keep, priority, lut, np.flatnonzero(cand), max_sweeps)
    return out


def homotopic_thin(img, keep, priority, adj: Adjacency = ADJ_84, max_iter: int | None = None,
                   workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Remove simple points outside `keep`, nearest to the background first.

    Runs to stability unless max_iter bounds the number of sweeps. The
    result R satisfies keep <= R <= img, has the same object and background
    component counts as img, and contains no removable point outside keep
    (when unbounded). Identical inputs give bit-identical output for any
    worker count; only the initial candidate scan fans out.
    """
    pix, keep, priority = _check_thin_args(img, keep, priority)
    return _thin_prepared(pix, keep, priority, adj, max_iter, workers, scheduler)


def homotopic_thicken(img, allowed, priority, adj: Adjacency = ADJ_84, max_iter: int | None = None,
                      workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Grow the object inside `allowed` by adding points simple for the background.

    Thinning of the complement under the dual adjacency. The complement of
    a finite object extends past the window, so the complemented arrays are
    padded with one constrained object ring standing in for the exterior;
    without it, object components touching the border could be bridged
    "through the outside", changing the topology. The ring is pinned by the
    constraint and cropped away afterwards.
    """
    pix = as_binary(img)
    allowed = as_binary(allowed)
    if allowed.shape != pix.shape:
        raise ValueError(f"constraint shape {allowed.shape} != image shape {pix.shape}")
    if np.any(pix & (allowed ^ 1)):
        raise ValueError("object pixels must be a subset of the allowed set")
    priority = np.ascontiguousarray(priority, dtype=np.int64)
    if priority.shape != pix.shape:
        raise ValueError(f"priority shape {priority.shape} != image shape {pix.shape}")
    if priority.size:
        lo = int(priority.min())
        hi = int(priority.max())
        if lo < 0 or hi >= (1 << 62) // ((pix.shape[0] + 2) * (pix.shape[1] + 2)):
            raise ValueError("priority values must be non-negative and fit the packed queue key")
    return _thicken_prepared(pix, allowed, priority, adj, max_iter, workers, scheduler)


def _thicken_prepared(pix, allowed, priority, adj, max_iter, workers, scheduler) -> np.ndarray:
    h, w = pix.shape
    z = np.ones((h + 2, w + 2), dtype=np.uint8)
    z[1:-1, 1:-1] = pix ^ 1
    floor = np.ones((h + 2, w + 2), dtype=np.uint8)
    floor[1:-1, 1:-1] = allowed ^ 1
    prio = np.zeros((h + 2, w + 2), dtype=np.int64)
    prio[1:-1, 1:-1] = priority
    thinned = _thin_prepared(z, floor, prio, adj.dual(), max_iter, workers, scheduler)
    return thinned[1:-1, 1:-1] ^ 1
