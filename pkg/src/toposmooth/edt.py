"""Exact squared Euclidean distance transform, two-phase and data-parallel.

Phase 1 scans each column with a down sweep and an up sweep, producing the
vertical distance to the nearest object pixel in that column. Phase 2
sweeps each row left to right building the sequence of column regions
(intervals where one column's parabola (x - y)^2 + G(row, y)^2 is the lower
envelope), then right to left reading the envelope off. Columns in phase 1
and rows in phase 2 are fully independent, so any exact partition of them
across workers yields a bit-identical result.

All distances are squared integers; no floating point is involved. Images
with no object pixel map to INF = h^2 + w^2 + 1 everywhere, a value
strictly above any realizable squared distance.
"""

from __future__ import annotations

import numpy as np

from . import sched
from ._jit import njit
from .grid import as_binary


def inf_value(shape) -> int:
    """Sentinel strictly above any squared distance within the given shape."""
    h, w = shape
    return int(h) * int(h) + int(w) * int(w) + 1


def sep(i: int, u: int, g_i: int, g_u: int) -> int:
    """Largest x at which column i's parabola still lies at or below column u's.

    For i < u, positions x <= sep(i, u) satisfy
    (x - i)^2 + g_i^2 <= (x - u)^2 + g_u^2. Callers must not pass the INF
    sentinel of an empty column; empty columns contribute no region.
    """
    if i >= u:
        raise ValueError(f"sep requires i < u, got i={i}, u={u}")
    if g_i < 0 or g_u < 0:
        raise ValueError("column distances must be non-negative")
    return (u * u - i * i + g_u * g_u - g_i * g_i) // (2 * (u - i))


@njit(nogil=True, cache=True)
def _phase1_kernel(pix, g, cols, inf, invert):  # pragma: no cover - exercised via wrappers
    # rows outer, bucket columns inner: keeps the sweeps cache-friendly on
    # row-major arrays while every column stays independent. invert=1
    # measures distances to the background instead (saves materializing
    # the complement image).
    n = pix.shape[0]
    for k in range(cols.size):
        c = cols[k]
        if pix[0, c] != invert:
            g[0, c] = 0
        else:
            g[0, c] = inf
    for r in range(1, n):
        for k in range(cols.size):
            c = cols[k]
            if pix[r, c] != invert:
                g[r, c] = 0
            elif g[r - 1, c] < inf:
                g[r, c] = g[r - 1, c] + 1
            else:
                g[r, c] = inf
    for r in range(n - 2, -1, -1):
        for k in range(cols.size):
            c = cols[k]
            if g[r + 1, c] < g[r, c]:
                g[r, c] = g[r + 1, c] + 1


@njit(nogil=True, cache=True)
def _phase2_kernel(g, out, rows, inf):  # pragma: no cover - exercised via wrappers
    m = g.shape[1]
    s = np.empty(m, np.int64)
    t = np.empty(m, np.int64)
    for k in range(rows.size):
        r = rows[k]
        q = -1
        for u in range(m):
            gu = g[r, u]
            if gu >= inf:
                continue
            if q < 0:
                q = 0
                s[0] = u
                t[0] = 0
            else:
                while q >= 0:
                    tq = t[q]
                    sq = s[q]
                    f_old = (tq - sq) * (tq - sq) + g[r, sq] * g[r, sq]
                    f_new = (tq - u) * (tq - u) + gu * gu
                    if f_old > f_new:
                        q -= 1
                    else:
                        break
                if q < 0:
                    q = 0
                    s[0] = u
                    t[0] = 0
                else:
                    sq = s[q]
                    w = 1 + (u * u - sq * sq + gu * gu - g[r, sq] * g[r, sq]) // (2 * (u - sq))
                    if w < m:
                        q += 1
                        s[q] = u
                        t[q] = w
        if q < 0:
            for u in range(m):
                out[r, u] = inf
        else:
            for u in range(m - 1, -1, -1):
                d = u - s[q]
                out[r, u] = d * d + g[r, s[q]] * g[r, s[q]]
                if u == t[q]:
                    q -= 1


def edt_phase1_columns(img, assignment: sched.TaskAssignment) -> np.ndarray:
    """Vertical distances: G[r, c] = |r - r'| to the nearest object pixel in column c.

    The assignment must cover every column exactly once; since columns are
    independent, every valid assignment yields the identical grid.
    """
    pix = as_binary(img)
    h, w = pix.shape
    sched.validate_assignment(assignment, w)
    inf = inf_value(pix.shape)
    g = np.empty((h, w), dtype=np.int64)
    sched.run_groups(assignment.buckets,
                     lambda cols: _phase1_kernel(pix, g, cols, inf, np.uint8(0)),
                     assignment.workers)
    return g


def edt_phase2_rows(g, assignment: sched.TaskAssignment) -> np.ndarray:
    """Squared distances from the column-distance grid, one independent row at a time."""
    g = np.ascontiguousarray(g, dtype=np.int64)
    if g.ndim != 2:
        raise ValueError("column-distance grid must be 2D")
    h, w = g.shape
    sched.validate_assignment(assignment, h)
    inf = inf_value(g.shape)
    out = np.empty((h, w), dtype=np.int64)
    sched.run_groups(assignment.buckets, lambda rows: _phase2_kernel(g, out, rows, inf), assignment.workers)
    return out


def _edt_prepared(pix, workers, scheduler, invert=False) -> np.ndarray:
    """Both phases without argument validation; optionally measures the
    distance to the background (equivalent to transforming the complement)."""
    h, w = pix.shape
    inf = inf_value(pix.shape)
    flag = np.uint8(1 if invert else 0)
    g = np.empty((h, w), dtype=np.int64)
    out = np.empty((h, w), dtype=np.int64)
    sched.run_groups(
        sched.make_groups(w, workers, scheduler),
        lambda cols: _phase1_kernel(pix, g, cols, inf, flag),
        workers,
    )
    sched.run_groups(
        sched.make_groups(h, workers, scheduler),
        lambda rows: _phase2_kernel(g, out, rows, inf),
        workers,
    )
    return out


def edt_squared(img, workers: int = 1, scheduler: str = "nps") -> np.ndarray:
    """Exact squared Euclidean distance to the nearest object pixel.

    Runs phase 1 over columns and phase 2 over rows with a full barrier in
    between. The output is bit-identical for every worker count and
    scheduler choice.
    """
    pix = as_binary(img)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if scheduler not in sched.SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}")
    if not pix.any():
        return np.full(pix.shape, inf_value(pix.shape), dtype=np.int64)
    return _edt_prepared(pix, workers, scheduler)


def edt_bruteforce(img) -> np.ndarray:
    """Definitional distance transform: minimize over all object pixels directly.

    O(n^2 m^2); the independent reference the fast transform is checked
    against. Deliberately shares no machinery with the two-phase path.
    """
    pix = as_binary(img)
    h, w = pix.shape
    inf = inf_value(pix.shape)
    rows, cols = np.nonzero(pix)
    best = np.full((h, w), inf, dtype=np.int64)
    if rows.size == 0:
        return best
    rr = np.arange(h, dtype=np.int64)[:, None]
    cc = np.arange(w, dtype=np.int64)[None, :]
    chunk = 128
    for start in range(0, rows.size, chunk):
        br = rows[start:start + chunk].astype(np.int64)[:, None, None]
        bc = cols[start:start + chunk].astype(np.int64)[:, None, None]
        d = (rr[None, :, :] - br) ** 2 + (cc[None, :, :] - bc) ** 2
        np.minimum(best, d.min(axis=0), out=best)
    return best
