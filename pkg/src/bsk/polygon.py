"""Planar polygon queries on complex-coordinate vertex arrays.

A polygon is a 1-d complex array of vertices; the closing edge from the last
vertex back to the first is implicit. The point-edge loops are compiled
with numba since they are O(points * edges).
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import DegenerateTargetError


@numba.njit(cache=True)
def _even_odd(vx, vy, px, py):
    n = vx.size
    out = np.zeros(px.size, dtype=np.bool_)
    for i in range(px.size):
        x, y = px[i], py[i]
        inside = False
        j = n - 1
        for k in range(n):
            # half-open in y so a vertex on the ray is counted once
            if (vy[k] > y) != (vy[j] > y):
                x_cross = vx[k] + (y - vy[k]) * (vx[j] - vx[k]) / (vy[j] - vy[k])
                if x < x_cross:
                    inside = not inside
            j = k
        out[i] = inside
    return out


@numba.njit(cache=True)
def _segment_distance(vx, vy, px, py):
    n = vx.size
    out = np.empty(px.size)
    for i in range(px.size):
        best = np.inf
        for k in range(n):
            j = k + 1 if k + 1 < n else 0
            dx = vx[j] - vx[k]
            dy = vy[j] - vy[k]
            ex = px[i] - vx[k]
            ey = py[i] - vy[k]
            len2 = dx * dx + dy * dy
            t = 0.0
            if len2 > 0.0:
                t = (ex * dx + ey * dy) / len2
                t = min(max(t, 0.0), 1.0)
            ex -= t * dx
            ey -= t * dy
            d2 = ex * ex + ey * ey
            if d2 < best:
                best = d2
        out[i] = np.sqrt(best)
    return out


@numba.njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy, eps):
    o = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if abs(o) <= eps:
        return 0
    return 1 if o > 0 else -1


@numba.njit(cache=True)
def _on_segment(ax, ay, bx, by, px, py):
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


@numba.njit(cache=True)
def _first_crossing(vx, vy, eps):
    n = vx.size
    for i in range(n):
        i2 = i + 1 if i + 1 < n else 0
        ax, ay, bx, by = vx[i], vy[i], vx[i2], vy[i2]
        for k in range(i + 2, n):
            if i == 0 and k == n - 1:
                continue  # closing edge shares vertex 0
            k2 = k + 1 if k + 1 < n else 0
            cx, cy, dx, dy = vx[k], vy[k], vx[k2], vy[k2]
            # cheap bounding-box rejection
            if max(cx, dx) < min(ax, bx) or max(ax, bx) < min(cx, dx):
                continue
            if max(cy, dy) < min(ay, by) or max(ay, by) < min(cy, dy):
                continue
            o1 = _orient(ax, ay, bx, by, cx, cy, eps)
            o2 = _orient(ax, ay, bx, by, dx, dy, eps)
            o3 = _orient(cx, cy, dx, dy, ax, ay, eps)
            o4 = _orient(cx, cy, dx, dy, bx, by, eps)
            if o1 * o2 < 0 and o3 * o4 < 0:
                return i, k
            # touching: an endpoint of one edge lies on the other
            if (
                (o1 == 0 and _on_segment(ax, ay, bx, by, cx, cy))
                or (o2 == 0 and _on_segment(ax, ay, bx, by, dx, dy))
                or (o3 == 0 and _on_segment(cx, cy, dx, dy, ax, ay))
                or (o4 == 0 and _on_segment(cx, cy, dx, dy, bx, by))
            ):
                return i, k
    return -1, -1


def _xy(a) -> tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(np.atleast_1d(np.asarray(a, dtype=complex)))
    return np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag)


def contains(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd rule with a ray toward +x."""
    return _even_odd(*_xy(poly), *_xy(pts))


def boundary_distance(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Euclidean distance from each point to the nearest polygon edge."""
    return _segment_distance(*_xy(poly), *_xy(pts))


def signed_distance(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance to the boundary, positive inside and negative outside."""
    dist = boundary_distance(poly, pts)
    return np.where(contains(poly, pts), dist, -dist)


def check_simple(poly: np.ndarray, rel_tol: float = 1e-12) -> None:
    """Raise :class:`DegenerateTargetError` if two non-adjacent edges meet.

    Crossings and touchings both count; orientation values within
    ``rel_tol * scale**2`` are treated as collinear. Adjacent edges share a
    vertex and are skipped.
    """
    vx, vy = _xy(poly)
    scale = float(np.max(np.hypot(vx - vx.mean(), vy - vy.mean()))) or 1.0
    i, k = _first_crossing(vx, vy, rel_tol * scale * scale)
    if i >= 0:
        raise DegenerateTargetError(
            f"target boundary self-intersects or touches (edges {i} and {k}); "
            "the supplied map is not univalent on the disk"
        )
