"""Joint time-risk edge costs.

A state's risk grows logarithmically as its collision time (heading-ray
distance over speed) drops below the safety threshold t_star. An edge's risk
is the worst interpolated state's risk raised to the risk weight k, and the
edge cost is that risk multiplied by the travel time. k = 0 recovers pure
time-optimal planning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import gmdm
from .environment import Workspace
from .gmdm import GmdmPath, State


@dataclass(frozen=True)
class RiskParams:
    """Safety threshold t_star (s), risk weight k, interpolation count M."""

    t_star: float
    k: float
    M: int = 4

    def __post_init__(self):
        if not self.t_star > 0.0:
            raise ValueError("t_star must be > 0")
        if self.k < 0.0:
            raise ValueError("k must be >= 0")
        if self.M < 2:
            raise ValueError("M must be >= 2")


@dataclass(frozen=True)
class EdgeCost:
    """Risk, travel time, and their product for one edge."""

    risk: float
    time: float
    joint: float

    @classmethod
    def of(cls, risk: float, time: float) -> "EdgeCost":
        return cls(risk=risk, time=time, joint=risk * time)


def collision_time(s: State, w: Workspace) -> float:
    """Seconds until the heading ray hits an obstruction at current speed."""
    return w.collision_distance(s.pose) / s.v


def state_risk(s: State, w: Workspace, rp: RiskParams) -> float:
    """1 + ln(t_star / t) when the collision time t is unsafe, else 1."""
    t = collision_time(s, w)
    if t < rp.t_star:
        return 1.0 + math.log(rp.t_star / t)
    return 1.0


def edge_time(path: GmdmPath) -> float:
    """Travel time: sum of segment length over segment speed."""
    return sum(m.length / m.speed for m in path.segments)


def edge_risk(path: GmdmPath, w: Workspace, rp: RiskParams) -> float:
    """Worst interpolated state risk, raised to the risk weight."""
    worst = max(state_risk(s, w, rp) for s in gmdm.interpolate_states(path, rp.M))
    return worst ** rp.k


def edge_cost(path: GmdmPath, w: Workspace, rp: RiskParams) -> EdgeCost:
    return EdgeCost.of(edge_risk(path, w, rp), edge_time(path))


def edge_cost_many(paths: Sequence[GmdmPath], w: Workspace,
                   rp: RiskParams) -> List[Optional[EdgeCost]]:
    """Batched edge_cost over candidate paths.

    Entries are None where some interpolated state sits in an obstacle (such
    candidates cannot be collision-free, so they carry no usable cost).
    Matches the scalar edge_cost to fp roundoff for valid entries.
    """
    if not paths:
        return []
    m_count = rp.M
    n = len(paths)
    lengths = np.array([p.length for p in paths])
    fractions = np.linspace(0.0, 1.0, m_count)
    states = gmdm.sample_paths(paths, lengths[:, None] * fractions[None, :])

    xs = states[..., 0].ravel()
    ys = states[..., 1].ravel()
    ths = states[..., 2].ravel()
    vs = states[..., 3].ravel()

    free = w.points_free(xs, ys)
    valid = free.reshape(n, m_count).all(axis=1)

    t = np.full(xs.shape, np.inf)
    t[free] = w.ray_distances(xs[free], ys[free], ths[free]) / vs[free]
    with np.errstate(divide="ignore"):
        risk = np.where(t < rp.t_star, 1.0 + np.log(rp.t_star / t), 1.0)
    worst = risk.reshape(n, m_count).max(axis=1)

    out: List[Optional[EdgeCost]] = []
    for i, p in enumerate(paths):
        if not valid[i]:
            out.append(None)
        else:
            out.append(EdgeCost.of(float(worst[i]) ** rp.k, edge_time(p)))
    return out
