"""Bounded 2D workspace with polygonal obstacles.

Free-space membership, heading-aligned ray casting (the simulated range
sensor), and trajectory collision checking. The workspace boundary counts as
an obstacle, so ray casts always return a finite distance. Queries are
vectorized internally; the workspace is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from . import gmdm
from .errors import InsideObstacle
from .gmdm import GmdmPath, Pose

_ON_EDGE_EPS = 1e-12  # distance below which a point counts as on an edge

Polygon = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned workspace rectangle."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("bounds must have positive extent")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin


def _segments_intersect(p1, p2, p3, p4) -> bool:
    """Proper or touching intersection of segments p1p2 and p3p4."""
    def orient(a, b, c):
        val = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(val) <= 1e-12:
            return 0
        return 1 if val > 0 else -1

    def on_seg(a, b, c):
        return (min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12
                and min(a[1], b[1]) - 1e-12 <= c[1] <= max(a[1], b[1]) + 1e-12)

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_seg(p1, p2, p3):
        return True
    if o2 == 0 and on_seg(p1, p2, p4):
        return True
    if o3 == 0 and on_seg(p3, p4, p1):
        return True
    if o4 == 0 and on_seg(p3, p4, p2):
        return True
    return False


def _validate_polygon(poly: Polygon, bounds: Bounds, label: str) -> None:
    if len(poly) < 3:
        raise ValueError(f"{label}: polygon needs at least 3 vertices")
    for x, y in poly:
        if not (bounds.xmin <= x <= bounds.xmax and bounds.ymin <= y <= bounds.ymax):
            raise ValueError(f"{label}: vertex ({x}, {y}) outside bounds")
    n = len(poly)
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a1, a2 = edges[i]
        if a1 == a2:
            raise ValueError(f"{label}: zero-length edge at vertex {i}")
        for j in range(i + 1, n):
            # Adjacent edges legitimately share a vertex.
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_intersect(a1, a2, *edges[j]):
                raise ValueError(f"{label}: polygon self-intersects (edges {i}, {j})")


@dataclass(frozen=True)
class Workspace:
    """Rectangle minus a set of simple polygonal obstacles.

    Obstacle interiors and boundaries (and the workspace boundary itself)
    are obstructed; everything else is free.
    """

    bounds: Bounds
    obstacles: Tuple[Polygon, ...]

    _seg: np.ndarray = field(init=False, repr=False, compare=False)
    _poly_edges: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, bounds: Bounds, obstacles: Sequence[Sequence[Sequence[float]]] = ()):
        object.__setattr__(self, "bounds", bounds)
        canon = tuple(tuple((float(x), float(y)) for x, y in poly) for poly in obstacles)
        object.__setattr__(self, "obstacles", canon)
        for i, poly in enumerate(canon):
            _validate_polygon(poly, bounds, f"obstacles[{i}]")

        segs = []
        poly_edges = []
        for poly in canon:
            pts = np.asarray(poly)
            nxt = np.roll(pts, -1, axis=0)
            edges = np.hstack([pts, nxt])  # ax, ay, bx, by
            poly_edges.append(edges)
            segs.append(edges)
        b = bounds
        corners = np.array([[b.xmin, b.ymin], [b.xmax, b.ymin],
                            [b.xmax, b.ymax], [b.xmin, b.ymax]])
        segs.append(np.hstack([corners, np.roll(corners, -1, axis=0)]))
        object.__setattr__(self, "_seg", np.vstack(segs))
        object.__setattr__(self, "_poly_edges", tuple(poly_edges))

    def points_free(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Boolean mask of strictly-free points (vectorized is_free)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        b = self.bounds
        free = (xs > b.xmin) & (xs < b.xmax) & (ys > b.ymin) & (ys < b.ymax)
        px = xs[..., None]
        py = ys[..., None]
        for edges in self._poly_edges:
            ax, ay, bx, by = (edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3])
            dx = bx - ax
            dy = by - ay
            # Even-odd crossing count for interior membership.
            straddles = (ay > py) != (by > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                x_at = ax + dx * (py - ay) / dy
            crossings = (straddles & (px < x_at)).sum(axis=-1)
            inside = crossings % 2 == 1
            # On-edge test: perpendicular distance below eps within the span.
            relx = px - ax
            rely = py - ay
            cross = relx * dy - rely * dx
            dot = relx * dx + rely * dy
            len2 = dx * dx + dy * dy
            on_edge = ((cross * cross <= _ON_EDGE_EPS * _ON_EDGE_EPS * len2)
                       & (dot >= 0.0) & (dot <= len2)).any(axis=-1)
            free &= ~(inside | on_edge)
        return free

    def is_free(self, x: float, y: float) -> bool:
        """True iff (x, y) is strictly inside bounds and outside every obstacle."""
        return bool(self.points_free(np.array([x]), np.array([y]))[0])

    def ray_distances(self, xs: np.ndarray, ys: np.ndarray,
                      thetas: np.ndarray) -> np.ndarray:
        """First-hit distance along each heading ray (origins assumed free).

        Tests every obstacle edge and the four boundary walls; since origins
        are strictly inside the bounds, a finite hit always exists.
        """
        xs = np.asarray(xs, dtype=float)[:, None]
        ys = np.asarray(ys, dtype=float)[:, None]
        cx = np.cos(np.asarray(thetas, dtype=float))[:, None]
        sy = np.sin(np.asarray(thetas, dtype=float))[:, None]

        ax, ay = self._seg[None, :, 0], self._seg[None, :, 1]
        ex = self._seg[None, :, 2] - ax
        ey = self._seg[None, :, 3] - ay
        relx = ax - xs
        rely = ay - ys

        denom = cx * ey - sy * ex
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (relx * ey - rely * ex) / denom
            u = (relx * sy - rely * cx) / denom
        hit = (np.abs(denom) > 1e-15) & (t > 0.0) & (u >= 0.0) & (u <= 1.0)
        t = np.where(hit, t, np.inf)
        return t.min(axis=1)

    def collision_distance(self, p: Pose) -> float:
        """Distance from a free pose to the first obstruction along its heading."""
        if not self.is_free(p.x, p.y):
            raise InsideObstacle(f"pose ({p.x}, {p.y}) is not in free space")
        return float(self.ray_distances(np.array([p.x]), np.array([p.y]),
                                        np.array([p.theta]))[0])

    def trajectory_is_free(self, path: GmdmPath, step: float) -> bool:
        """True iff points at arc lengths 0, step, 2*step, ..., length are free."""
        if not step > 0.0:
            raise ValueError("step must be > 0")
        n = int(path.length / step)
        ss = np.arange(n + 1) * step
        if path.length - ss[-1] > 1e-12:
            ss = np.append(ss, path.length)
        states = gmdm.sample_path(path, ss)
        return bool(self.points_free(states[:, 0], states[:, 1]).all())
