"""Generalized multi-speed Dubins motion model.

Closed-form steering between 4D states (x, y, heading, speed) using
three-segment paths of L/S/R primitives. Unlike the classical single-radius
Dubins construction, each segment carries its own speed, so the two arc
segments of a CSC path (and all three arcs of a CCC path) may have different
turning radii. Candidate trajectories are enumerated over a discrete grid of
middle-segment speeds; the caller picks among them by cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadCount, DegenerateQuery, OutOfRange

TWO_PI = 2.0 * math.pi

CSC_TYPES = ("LSL", "LSR", "RSL", "RSR")
CCC_TYPES = ("LRL", "RLR")
# Fixed enumeration order; ties between equal-cost candidates resolve to the
# earlier entry, so this order is part of the determinism contract.
PATH_TYPES = CSC_TYPES + CCC_TYPES

_EPS = 1e-12


def wrap_angle(theta: float) -> float:
    """Reduce an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod of a tiny negative can round up to exactly 2*pi
        t = 0.0
    return t + 0.0  # normalize -0.0


def angle_dist(a: float, b: float) -> float:
    """Circular distance between two angles, in [0, pi]."""
    d = abs(wrap_angle(a) - wrap_angle(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Pose:
    """Planar pose; heading is normalized to [0, 2*pi) on construction."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))


@dataclass(frozen=True)
class State:
    """Vehicle configuration: pose plus forward speed."""

    pose: Pose
    v: float

    def __post_init__(self):
        object.__setattr__(self, "v", float(self.v))

    @property
    def x(self) -> float:
        return self.pose.x

    @property
    def y(self) -> float:
        return self.pose.y

    @property
    def theta(self) -> float:
        return self.pose.theta

    @classmethod
    def make(cls, x: float, y: float, theta: float, v: float) -> "State":
        return cls(Pose(x, y, theta), v)


@dataclass(frozen=True)
class VehicleLimits:
    """Speed interval and maximum turning rate.

    The turning radius at speed v (arcs are always flown at the maximum
    turning rate) is v / u_max, so faster segments turn on wider circles.
    """

    v_min: float
    v_max: float
    u_max: float

    def __post_init__(self):
        if not self.v_min > 0.0:
            raise ValueError("v_min must be > 0")
        if self.v_max < self.v_min:
            raise ValueError("v_max must be >= v_min")
        if not self.u_max > 0.0:
            raise ValueError("u_max must be > 0")

    def radius_for(self, v: float) -> float:
        return v / self.u_max

    @property
    def r_min(self) -> float:
        return self.v_min / self.u_max

    @property
    def r_max(self) -> float:
        return self.v_max / self.u_max

    def admissible(self, kappa: float, v: float) -> bool:
        """Membership test for the (curvature, speed) constraint set."""
        return self.v_min <= v <= self.v_max and abs(kappa) <= self.u_max / v


@dataclass(frozen=True)
class MotionPrimitive:
    """One elementary motion: a straight run or a constant-radius arc.

    sigma is a distance in meters for kind 'S' and a rotation in [0, 2*pi)
    radians for kinds 'L'/'R'. radius applies to arcs only.
    """

    kind: str
    sigma: float
    speed: float
    radius: float = 0.0

    def __post_init__(self):
        if self.kind not in ("S", "L", "R"):
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if not self.speed > 0.0:
            raise ValueError("primitive speed must be > 0")
        if self.kind == "S":
            if self.sigma < 0.0:
                raise ValueError("straight distance must be >= 0")
        else:
            if not self.radius > 0.0:
                raise ValueError("arc radius must be > 0")
            object.__setattr__(self, "sigma", wrap_angle(float(self.sigma)))

    @property
    def length(self) -> float:
        return self.sigma if self.kind == "S" else self.radius * self.sigma

    @property
    def duration(self) -> float:
        return self.length / self.speed


@dataclass(frozen=True)
class GmdmPath:
    """A three-segment trajectory exactly connecting two states."""

    path_type: str
    segments: Tuple[MotionPrimitive, MotionPrimitive, MotionPrimitive]
    start: State
    end: State
    length: float
    duration: float


def apply_primitive(p: Pose, m: MotionPrimitive) -> Pose:
    """Advance a pose through one full primitive (closed form)."""
    if m.kind == "S":
        return Pose(p.x + m.sigma * math.cos(p.theta),
                    p.y + m.sigma * math.sin(p.theta),
                    p.theta)
    r = m.radius
    if m.kind == "L":
        t1 = p.theta + m.sigma
        return Pose(p.x - r * math.sin(p.theta) + r * math.sin(t1),
                    p.y + r * math.cos(p.theta) - r * math.cos(t1),
                    t1)
    t1 = p.theta - m.sigma
    return Pose(p.x + r * math.sin(p.theta) - r * math.sin(t1),
                p.y - r * math.cos(p.theta) + r * math.cos(t1),
                t1)


def chain(p: Pose, segments: Sequence[MotionPrimitive]) -> Pose:
    """Apply a sequence of primitives in order."""
    for m in segments:
        p = apply_primitive(p, m)
    return p


def _turn_center(p: Pose, r: float, left: bool) -> Tuple[float, float]:
    if left:
        return p.x - r * math.sin(p.theta), p.y + r * math.cos(p.theta)
    return p.x + r * math.sin(p.theta), p.y - r * math.cos(p.theta)


def solve_csc(start: Pose, end: Pose, path_type: str,
              r1: float, r3: float) -> Optional[Tuple[float, float, float]]:
    """Solve a curve-straight-curve connection with unequal arc radii.

    LSL/RSR use the external tangent between the two turning circles (exists
    iff the center distance is at least |r3 - r1|); LSR/RSL use the internal
    tangent (center distance at least r1 + r3). Returns (sigma_c1, sigma_d,
    sigma_c3) or None when the tangent construction does not exist.
    """
    if path_type not in CSC_TYPES:
        raise ValueError(f"not a CSC path type: {path_type!r}")
    if r1 <= 0.0 or r3 <= 0.0:
        raise ValueError("arc radii must be > 0")
    first_left = path_type[0] == "L"
    last_left = path_type[2] == "L"

    c1x, c1y = _turn_center(start, r1, first_left)
    c3x, c3y = _turn_center(end, r3, last_left)
    dx, dy = c3x - c1x, c3y - c1y
    d = math.hypot(dx, dy)

    # Signed offset that the tangent direction must absorb:
    # sin(phi - psi) = off / d with phi the center-to-center bearing.
    if path_type == "LSL":
        off = r3 - r1
    elif path_type == "RSR":
        off = r1 - r3
    elif path_type == "LSR":
        off = -(r1 + r3)
    else:  # RSL
        off = r1 + r3

    if d < abs(off):
        return None
    if d <= _EPS:
        # Coincident centers with equal radii: a single arc on one circle.
        psi = start.theta
    else:
        psi = math.atan2(dy, dx) - math.asin(max(-1.0, min(1.0, off / d)))

    sigma_d = math.sqrt(max(d * d - off * off, 0.0))
    sigma_c1 = wrap_angle(psi - start.theta) if first_left else wrap_angle(start.theta - psi)
    sigma_c3 = wrap_angle(end.theta - psi) if last_left else wrap_angle(psi - end.theta)
    return sigma_c1, sigma_d, sigma_c3


def solve_ccc(start: Pose, end: Pose, path_type: str, r1: float, r2: float,
              r3: float) -> List[Tuple[float, float, float]]:
    """Solve curve-curve-curve connections with unequal arc radii.

    The middle circle must touch the first circle at center distance r1 + r2
    and the last at r2 + r3; its center is found by intersecting the two
    corresponding circles. Both intersection branches are returned (they are
    distinct valid connections); the list is empty when the end circles are
    too far apart or nested such that no middle circle fits.
    """
    if path_type not in CCC_TYPES:
        raise ValueError(f"not a CCC path type: {path_type!r}")
    if r1 <= 0.0 or r2 <= 0.0 or r3 <= 0.0:
        raise ValueError("arc radii must be > 0")
    outer_left = path_type[0] == "L"

    c1x, c1y = _turn_center(start, r1, outer_left)
    c3x, c3y = _turn_center(end, r3, outer_left)
    dx, dy = c3x - c1x, c3y - c1y
    d = math.hypot(dx, dy)
    big1 = r1 + r2
    big2 = r2 + r3

    centers: List[Tuple[float, float]] = []
    if d <= _EPS:
        if abs(big1 - big2) <= _EPS:
            # Coincident end circles: infinitely many middle circles; pick a
            # fixed representative for determinism.
            centers.append((c1x + big1, c1y))
        # else: concentric with different gaps, no middle circle.
    else:
        if d > big1 + big2 or d < abs(big1 - big2):
            return []
        a = (d * d + big1 * big1 - big2 * big2) / (2.0 * d)
        h_sq = big1 * big1 - a * a
        if h_sq < 0.0:
            h_sq = 0.0
        h = math.sqrt(h_sq)
        ux, uy = dx / d, dy / d
        bx, by = c1x + a * ux, c1y + a * uy
        centers.append((bx - h * uy, by + h * ux))
        if h > _EPS:
            centers.append((bx + h * uy, by - h * ux))

    out: List[Tuple[float, float, float]] = []
    for c2x, c2y in centers:
        alpha1 = math.atan2(c2y - c1y, c2x - c1x)
        alpha3 = math.atan2(c2y - c3y, c2x - c3x)
        if outer_left:  # LRL
            h12 = alpha1 + 0.5 * math.pi
            h23 = alpha3 + 0.5 * math.pi
            sigma1 = wrap_angle(h12 - start.theta)
            sigma2 = wrap_angle(h12 - h23)
            sigma3 = wrap_angle(end.theta - h23)
        else:  # RLR
            h12 = alpha1 - 0.5 * math.pi
            h23 = alpha3 - 0.5 * math.pi
            sigma1 = wrap_angle(start.theta - h12)
            sigma2 = wrap_angle(h23 - h12)
            sigma3 = wrap_angle(h23 - end.theta)
        out.append((sigma1, sigma2, sigma3))
    return out


def middle_speeds(limits: VehicleLimits, n_speeds: int) -> Tuple[float, ...]:
    """Uniform speed grid over [v_min, v_max] including both endpoints.

    Requires n_speeds >= 2; collapses to a single value when the speed
    interval is degenerate.
    """
    if n_speeds < 2:
        raise ValueError("n_speeds must be >= 2")
    if limits.v_max - limits.v_min <= 0.0:
        return (limits.v_min,)
    step = (limits.v_max - limits.v_min) / (n_speeds - 1)
    vals = [limits.v_min + i * step for i in range(n_speeds - 1)]
    vals.append(limits.v_max)
    return tuple(dict.fromkeys(vals))


def _build_path(path_type: str, segments: Tuple[MotionPrimitive, ...],
                a: State, b: State) -> GmdmPath:
    length = sum(m.length for m in segments)
    duration = sum(m.duration for m in segments)
    return GmdmPath(path_type=path_type, segments=segments, start=a, end=b,
                    length=length, duration=duration)


def enumerate_candidates(a: State, b: State, limits: VehicleLimits,
                         n_speeds: int) -> List[GmdmPath]:
    """All solvable three-segment connections from a to b.

    First/last segments run at the endpoint speeds (hence endpoint radii);
    the middle segment is tried at every grid speed. For CSC types the
    geometry is independent of the middle speed, so the grid only varies the
    straight segment's speed; for CCC types each middle speed changes the
    middle radius and both circle-intersection branches are emitted (branch
    order: counterclockwise offset first).
    """
    if a == b:
        raise DegenerateQuery(f"identical query states: {a}")
    r1 = limits.radius_for(a.v)
    r3 = limits.radius_for(b.v)
    speeds = middle_speeds(limits, n_speeds)

    out: List[GmdmPath] = []
    for path_type in PATH_TYPES:
        k1, k2, k3 = path_type
        if path_type in CSC_TYPES:
            sol = solve_csc(a.pose, b.pose, path_type, r1, r3)
            if sol is None:
                continue
            s1, sd, s3 = sol
            first = MotionPrimitive(k1, s1, a.v, r1)
            last = MotionPrimitive(k3, s3, b.v, r3)
            for vm in speeds:
                segs = (first, MotionPrimitive("S", sd, vm), last)
                out.append(_build_path(path_type, segs, a, b))
        else:
            for vm in speeds:
                r2 = limits.radius_for(vm)
                for s1, s2, s3 in solve_ccc(a.pose, b.pose, path_type, r1, r2, r3):
                    segs = (MotionPrimitive(k1, s1, a.v, r1),
                            MotionPrimitive(k2, s2, vm, r2),
                            MotionPrimitive(k3, s3, b.v, r3))
                    out.append(_build_path(path_type, segs, a, b))
    return out


def _advance(p: Pose, m: MotionPrimitive, arclen: float) -> Pose:
    """Advance a pose a partial arc length into a primitive."""
    if m.kind == "S":
        partial = MotionPrimitive("S", arclen, m.speed)
    else:
        # Bypass sigma wrapping: arclen/radius is already in [0, 2*pi).
        partial = MotionPrimitive(m.kind, min(arclen / m.radius, TWO_PI - _EPS),
                                  m.speed, m.radius)
    return apply_primitive(p, partial)


def point_at(path: GmdmPath, s: float) -> State:
    """State at arc length s; junctions belong to the earlier segment."""
    if s < -1e-9 or s > path.length + 1e-9:
        raise OutOfRange(f"arc length {s} outside [0, {path.length}]")
    s = min(max(s, 0.0), path.length)
    cursor = path.start.pose
    remaining = s
    for i, m in enumerate(path.segments):
        seg_len = m.length
        if remaining <= seg_len or i == 2:
            return State(_advance(cursor, m, min(remaining, seg_len)), m.speed)
        remaining -= seg_len
        cursor = apply_primitive(cursor, m)
    raise AssertionError("unreachable")


def interpolate_states(path: GmdmPath, m_count: int) -> List[State]:
    """m_count states at uniform arc-length spacing, endpoints exact."""
    if m_count < 2:
        raise BadCount(f"need at least 2 interpolated states, got {m_count}")
    out = [path.start]
    for j in range(1, m_count - 1):
        out.append(point_at(path, j * path.length / (m_count - 1)))
    out.append(path.end)
    return out


def sample_path(path: GmdmPath, ss: np.ndarray) -> np.ndarray:
    """Vectorized point_at: rows of (x, y, theta, v) at arc lengths ss.

    Heading values are wrapped into [0, 2*pi). Out-of-range arc lengths are
    clamped to the path (callers produce values within fp noise of it).
    """
    ss = np.asarray(ss, dtype=float)
    return sample_paths([path], ss[None, :] if ss.ndim == 1 else ss)[0]


def sample_paths(paths: Sequence[GmdmPath], ss: np.ndarray) -> np.ndarray:
    """States along several paths at once.

    ss has shape (n_paths, n_samples) of arc lengths (clamped per path);
    returns shape (n_paths, n_samples, 4) with columns x, y, theta, v.
    """
    n = len(paths)
    ss = np.asarray(ss, dtype=float)
    if ss.shape[0] != n:
        raise ValueError("arc-length rows must match number of paths")

    cx = np.empty((n, 3))
    cy = np.empty((n, 3))
    cth = np.empty((n, 3))
    seg_len = np.empty((n, 3))
    radius = np.ones((n, 3))
    sign = np.zeros((n, 3))
    speed = np.empty((n, 3))
    for i, p in enumerate(paths):
        cursor = p.start.pose
        for j, m in enumerate(p.segments):
            cx[i, j], cy[i, j], cth[i, j] = cursor.x, cursor.y, cursor.theta
            seg_len[i, j] = m.length
            speed[i, j] = m.speed
            if m.kind != "S":
                radius[i, j] = m.radius
                sign[i, j] = 1.0 if m.kind == "L" else -1.0
            cursor = apply_primitive(cursor, m)

    cum = np.cumsum(seg_len, axis=1)
    total = cum[:, 2:3]
    s = np.clip(ss, 0.0, total)
    idx = np.minimum((s[:, :, None] > cum[:, None, :]).sum(axis=2), 2)

    rows = np.arange(n)[:, None]
    prev = np.concatenate([np.zeros((n, 1)), cum[:, :2]], axis=1)
    local = np.clip(s - prev[rows, idx], 0.0, seg_len[rows, idx])
    x0, y0, th0 = cx[rows, idx], cy[rows, idx], cth[rows, idx]
    r = radius[rows, idx]
    sg = sign[rows, idx]
    v = speed[rows, idx]

    straight = sg == 0.0
    out = np.empty(s.shape + (4,))
    th1 = th0 + sg * local / r
    out[..., 0] = np.where(straight, x0 + local * np.cos(th0),
                           x0 - sg * r * np.sin(th0) + sg * r * np.sin(th1))
    out[..., 1] = np.where(straight, y0 + local * np.sin(th0),
                           y0 + sg * r * np.cos(th0) - sg * r * np.cos(th1))
    wrapped = np.mod(th1, TWO_PI)
    wrapped[wrapped >= TWO_PI] = 0.0  # fp mod of tiny negatives rounds to 2*pi
    out[..., 2] = np.where(straight, th0, wrapped)
    out[..., 3] = v
    return out
