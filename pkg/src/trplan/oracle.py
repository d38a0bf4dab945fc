"""Independent reference implementations for testing and acceptance.

Nothing here shares geometry code with the steering or cost modules: the
classical Dubins solver uses the standard per-word trigonometric formulas,
and the kinematics check integrates the vehicle ODE numerically. Agreement
between these references and the closed-form model is therefore evidence,
not tautology. Speed is a non-goal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import gmdm, planner, timerisk
from .environment import Workspace
from .gmdm import MotionPrimitive, Pose, State, VehicleLimits
from .timerisk import RiskParams


@dataclass
class OracleReport:
    """Outcome of a brute-force comparison sweep."""

    cases: int
    max_abs_error: float
    failures: List[Tuple[object, float, float]] = field(default_factory=list)


def _mod2pi(theta: float) -> float:
    return theta - 2.0 * math.pi * math.floor(theta / (2.0 * math.pi))


def _lsl(alpha: float, beta: float, d: float) -> Optional[float]:
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) \
        + 2.0 * d * (math.sin(alpha) - math.sin(beta))
    if p_sq < 0.0:
        return None
    tmp = math.atan2(math.cos(beta) - math.cos(alpha),
                     d + math.sin(alpha) - math.sin(beta))
    t = _mod2pi(-alpha + tmp)
    q = _mod2pi(beta - tmp)
    return t + math.sqrt(p_sq) + q


def _rsr(alpha: float, beta: float, d: float) -> Optional[float]:
    p_sq = 2.0 + d * d - 2.0 * math.cos(alpha - beta) \
        + 2.0 * d * (math.sin(beta) - math.sin(alpha))
    if p_sq < 0.0:
        return None
    tmp = math.atan2(math.cos(alpha) - math.cos(beta),
                     d - math.sin(alpha) + math.sin(beta))
    t = _mod2pi(alpha - tmp)
    q = _mod2pi(-beta + tmp)
    return t + math.sqrt(p_sq) + q


def _lsr(alpha: float, beta: float, d: float) -> Optional[float]:
    p_sq = -2.0 + d * d + 2.0 * math.cos(alpha - beta) \
        + 2.0 * d * (math.sin(alpha) + math.sin(beta))
    if p_sq < 0.0:
        return None
    p = math.sqrt(p_sq)
    tmp = math.atan2(-math.cos(alpha) - math.cos(beta),
                     d + math.sin(alpha) + math.sin(beta)) - math.atan2(-2.0, p)
    t = _mod2pi(-alpha + tmp)
    q = _mod2pi(-_mod2pi(beta) + tmp)
    return t + p + q


def _rsl(alpha: float, beta: float, d: float) -> Optional[float]:
    p_sq = d * d - 2.0 + 2.0 * math.cos(alpha - beta) \
        - 2.0 * d * (math.sin(alpha) + math.sin(beta))
    if p_sq < 0.0:
        return None
    p = math.sqrt(p_sq)
    tmp = math.atan2(math.cos(alpha) + math.cos(beta),
                     d - math.sin(alpha) - math.sin(beta)) - math.atan2(2.0, p)
    t = _mod2pi(alpha - tmp)
    q = _mod2pi(beta - tmp)
    return t + p + q


def _rlr(alpha: float, beta: float, d: float) -> Optional[float]:
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta)
           + 2.0 * d * (math.sin(alpha) - math.sin(beta))) / 8.0
    if abs(tmp) > 1.0:
        return None
    p = _mod2pi(2.0 * math.pi - math.acos(tmp))
    t = _mod2pi(alpha - math.atan2(math.cos(alpha) - math.cos(beta),
                                   d - math.sin(alpha) + math.sin(beta))
                + _mod2pi(p / 2.0))
    q = _mod2pi(alpha - beta - t + _mod2pi(p))
    return t + p + q


def _lrl(alpha: float, beta: float, d: float) -> Optional[float]:
    tmp = (6.0 - d * d + 2.0 * math.cos(alpha - beta)
           + 2.0 * d * (math.sin(beta) - math.sin(alpha))) / 8.0
    if abs(tmp) > 1.0:
        return None
    p = _mod2pi(2.0 * math.pi - math.acos(tmp))
    t = _mod2pi(-alpha - math.atan2(math.cos(alpha) - math.cos(beta),
                                    d + math.sin(alpha) - math.sin(beta))
                + p / 2.0)
    q = _mod2pi(_mod2pi(beta) - alpha - t + _mod2pi(p))
    return t + p + q


_WORDS: Tuple[Callable[[float, float, float], Optional[float]], ...] = (
    _lsl, _rsr, _lsr, _rsl, _rlr, _lrl)


def dubins_reference(a: Pose, b: Pose, rho: float) -> float:
    """Classical single-radius Dubins shortest-path length.

    Standard word-by-word formulas in the frame where the start pose sits at
    the origin heading along +x and lengths are normalized by rho.
    """
    if not rho > 0.0:
        raise ValueError("rho must be > 0")
    dx = b.x - a.x
    dy = b.y - a.y
    lx = math.cos(a.theta) * dx + math.sin(a.theta) * dy
    ly = -math.sin(a.theta) * dx + math.cos(a.theta) * dy
    d = math.hypot(lx, ly) / rho
    theta = _mod2pi(math.atan2(ly, lx))
    alpha = _mod2pi(-theta)
    beta = _mod2pi(b.theta - a.theta - theta)

    best = math.inf
    for word in _WORDS:
        length = word(alpha, beta, d)
        if length is not None and length < best:
            best = length
    return best * rho


def integrate_primitive(p: Pose, m: MotionPrimitive, dt: float = 1e-4) -> Pose:
    """RK4 integration of the vehicle kinematics under constant controls.

    The turn rate is +speed/radius for L, -speed/radius for R, 0 for S; the
    speed is the primitive's. With constant controls the heading advances
    exactly linearly, so each RK4 step reduces to a closed-form trigonometric
    sum; the steps are accumulated vectorially for speed, which is
    algebraically identical to stepping one at a time.
    """
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    duration = m.duration
    if duration == 0.0:
        return p
    u = 0.0 if m.kind == "S" else (m.speed / m.radius if m.kind == "L" else -m.speed / m.radius)
    v = m.speed

    n_full = int(duration / dt)
    steps = np.full(n_full + 1, dt)
    steps[-1] = duration - n_full * dt
    if steps[-1] <= 0.0:
        steps = steps[:n_full]
    starts = np.concatenate([[0.0], np.cumsum(steps)[:-1]])

    th0 = p.theta + u * starts
    th_mid = th0 + u * steps / 2.0
    th1 = th0 + u * steps
    x = p.x + float(np.sum(v * steps / 6.0 * (np.cos(th0) + 4.0 * np.cos(th_mid) + np.cos(th1))))
    y = p.y + float(np.sum(v * steps / 6.0 * (np.sin(th0) + 4.0 * np.sin(th_mid) + np.sin(th1))))
    theta = p.theta + u * duration
    return Pose(x, y, theta)


def dense_speed_sweep(a: State, b: State, limits: VehicleLimits, n_dense: int,
                      w: Workspace, rp: RiskParams, step: float = 0.05) -> float:
    """Best collision-free joint cost over a dense middle-speed grid.

    Runs the production steering machinery with n_dense uniformly spaced
    middle speeds; used to measure the optimality gap of the coarse grid.
    Returns +inf when no candidate is solvable and collision-free.
    """
    cfg = planner.PlannerConfig(n_samples=1, k_neighbors=1, max_connect=math.inf,
                                n_speeds=n_dense, step=step)
    res = planner.steer(a, b, w, limits, rp, cfg)
    return res[1].joint if res is not None else math.inf


def compare_sweep(pairs, compute_expected, compute_got,
                  tolerance: float) -> OracleReport:
    """Run expected-vs-got over an input sweep and collect failures."""
    max_err = 0.0
    failures = []
    count = 0
    for case in pairs:
        expected = compute_expected(case)
        got = compute_got(case)
        err = abs(expected - got)
        max_err = max(max_err, err)
        if err > tolerance:
            failures.append((case, expected, got))
        count += 1
    return OracleReport(cases=count, max_abs_error=max_err, failures=failures)


def random_pose(rng: np.random.Generator, span: float = 30.0) -> Pose:
    return Pose(rng.uniform(0.0, span), rng.uniform(0.0, span),
                rng.uniform(0.0, 2.0 * math.pi))


def dubins_reduction_report(n_pairs: int, seed: int, rho: float = 1.0,
                            span: float = 30.0,
                            tolerance: float = 1e-9) -> OracleReport:
    """Single-speed model length vs classical Dubins over random pose pairs."""
    rng = np.random.default_rng(np.random.PCG64(seed))
    limits = VehicleLimits(v_min=rho, v_max=rho, u_max=1.0)
    pairs = [(random_pose(rng, span), random_pose(rng, span)) for _ in range(n_pairs)]

    def expected(case):
        return dubins_reference(case[0], case[1], rho)

    def got(case):
        a = State(case[0], rho)
        b = State(case[1], rho)
        cands = gmdm.enumerate_candidates(a, b, limits, n_speeds=2)
        return min(p.length for p in cands)

    return compare_sweep(pairs, expected, got, tolerance)


def random_primitive(rng: np.random.Generator,
                     limits: VehicleLimits) -> MotionPrimitive:
    kind = ("S", "L", "R")[rng.integers(0, 3)]
    speed = rng.uniform(limits.v_min, limits.v_max)
    if kind == "S":
        return MotionPrimitive("S", rng.uniform(0.0, 10.0), speed)
    return MotionPrimitive(kind, rng.uniform(0.0, 2.0 * math.pi), speed,
                           limits.radius_for(speed))


def endpoint_consistency_report(n_cases: int, seed: int, dt: float = 1e-4,
                                pos_tol: float = 1e-6,
                                heading_tol: float = 1e-9) -> OracleReport:
    """Closed-form primitive endpoints vs RK4 integration.

    max_abs_error tracks position error; heading failures are folded into
    the failure list with their own tolerance.
    """
    rng = np.random.default_rng(np.random.PCG64(seed))
    limits = VehicleLimits(v_min=0.5, v_max=1.0, u_max=0.5)
    max_err = 0.0
    failures = []
    for _ in range(n_cases):
        p = random_pose(rng)
        m = random_primitive(rng, limits)
        closed = gmdm.apply_primitive(p, m)
        integ = integrate_primitive(p, m, dt)
        pos_err = math.hypot(closed.x - integ.x, closed.y - integ.y)
        head_err = gmdm.angle_dist(closed.theta, integ.theta)
        max_err = max(max_err, pos_err)
        if pos_err > pos_tol or head_err > heading_tol:
            failures.append(((p, m), pos_err, head_err))
    return OracleReport(cases=n_cases, max_abs_error=max_err, failures=failures)


def reachability_report(n_pairs: int, seed: int,
                        limits: Optional[VehicleLimits] = None,
                        span: float = 30.0,
                        tolerance: float = 1e-9) -> OracleReport:
    """Candidate existence and endpoint chaining for well-separated states.

    Every sampled pair is farther apart than 4 * r_max, where CSC tangents
    always exist. max_abs_error is the worst chained-endpoint mismatch
    (position and heading combined) over every candidate of every pair.
    """
    if limits is None:
        limits = VehicleLimits(v_min=0.5, v_max=1.0, u_max=0.5)
    rng = np.random.default_rng(np.random.PCG64(seed))
    min_sep = 4.0 * limits.r_max
    max_err = 0.0
    failures = []
    count = 0
    while count < n_pairs:
        pa = random_pose(rng, span)
        pb = random_pose(rng, span)
        if math.hypot(pb.x - pa.x, pb.y - pa.y) <= min_sep:
            continue
        count += 1
        a = State(pa, rng.uniform(limits.v_min, limits.v_max))
        b = State(pb, rng.uniform(limits.v_min, limits.v_max))
        cands = gmdm.enumerate_candidates(a, b, limits, n_speeds=3)
        if not cands:
            failures.append(((a, b), math.inf, math.inf))
            continue
        for path in cands:
            endpoint = gmdm.chain(pa, path.segments)
            err = max(math.hypot(endpoint.x - pb.x, endpoint.y - pb.y),
                      gmdm.angle_dist(endpoint.theta, pb.theta))
            max_err = max(max_err, err)
            if err > tolerance:
                failures.append(((a, b, path.path_type), err, err))
    return OracleReport(cases=n_pairs, max_abs_error=max_err, failures=failures)
