"""Asymptotically optimal tree planner over (x, y, heading, speed) states.

Standard RRT* skeleton with three swapped-in pieces: states are sampled from
the 4D configuration space, the steering function returns the cheapest
collision-free multi-speed Dubins connection, and edges are priced by the
joint time-risk cost. Neighbor gating uses Euclidean position distance; the
joint cost drives parent choice and rewiring. All randomness flows from one
PCG64 seed, so runs are reproducible bit for bit.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import gmdm, timerisk
from .environment import Workspace
from .errors import DegenerateQuery, InvalidEndpoints, SamplingStalled
from .gmdm import GmdmPath, State, VehicleLimits
from .timerisk import EdgeCost, RiskParams

_STALL_LIMIT = 10_000


@dataclass(frozen=True)
class PlannerConfig:
    n_samples: int = 3000
    k_neighbors: int = 100
    max_connect: float = 3.0
    n_speeds: int = 3
    step: float = 0.05
    goal_bias: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if not self.max_connect > 0.0:
            raise ValueError("max_connect must be > 0")
        if self.n_speeds < 2:
            raise ValueError("n_speeds must be >= 2")
        if not self.step > 0.0:
            raise ValueError("step must be > 0")
        if not 0.0 <= self.goal_bias < 1.0:
            raise ValueError("goal_bias must be in [0, 1)")


class Tree:
    """Search tree: states, parent links, cost-to-come, incoming edges."""

    def __init__(self, root: State):
        self.nodes: List[State] = [root]
        self.parent: List[Optional[int]] = [None]
        self.cost_to_come: List[float] = [0.0]
        self.edge: List[Optional[GmdmPath]] = [None]
        self.edge_cost: List[Optional[EdgeCost]] = [None]
        self._children: List[set] = [set()]
        self._index: Dict[State, int] = {root: 0}
        self._xy = np.empty((256, 2))
        self._xy[0] = (root.x, root.y)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, s: State) -> bool:
        return s in self._index

    def positions(self) -> np.ndarray:
        return self._xy[: len(self.nodes)]

    def add(self, s: State, parent: int, cost: float, edge: GmdmPath,
            edge_cost: EdgeCost) -> int:
        idx = len(self.nodes)
        self.nodes.append(s)
        self.parent.append(parent)
        self.cost_to_come.append(cost)
        self.edge.append(edge)
        self.edge_cost.append(edge_cost)
        self._children.append(set())
        self._children[parent].add(idx)
        self._index[s] = idx
        if idx >= self._xy.shape[0]:
            grown = np.empty((self._xy.shape[0] * 2, 2))
            grown[:idx] = self._xy[:idx]
            self._xy = grown
        self._xy[idx] = (s.x, s.y)
        return idx

    def reparent(self, idx: int, new_parent: int, edge: GmdmPath,
                 edge_cost: EdgeCost, new_cost: float) -> None:
        """Re-home a node and push the cost change through its subtree."""
        old_parent = self.parent[idx]
        if old_parent is not None:
            self._children[old_parent].discard(idx)
        delta = new_cost - self.cost_to_come[idx]
        self.parent[idx] = new_parent
        self.edge[idx] = edge
        self.edge_cost[idx] = edge_cost
        self.cost_to_come[idx] = new_cost
        self._children[new_parent].add(idx)
        queue = deque(self._children[idx])
        while queue:
            child = queue.popleft()
            self.cost_to_come[child] += delta
            queue.extend(self._children[child])

    def chain_to(self, idx: int) -> List[int]:
        out = []
        cur: Optional[int] = idx
        while cur is not None:
            out.append(cur)
            cur = self.parent[cur]
        out.reverse()
        return out


@dataclass
class PlanResult:
    """Best start-to-goal edge chain plus run statistics.

    total aggregates the chain: time is the summed travel time, joint the
    summed edge cost, and risk the worst single edge risk. trace holds the
    best goal cost after each sample (inf before the first connection).
    """

    path: List[GmdmPath]
    total: EdgeCost
    trace: List[float]
    nodes_built: int
    tree: Tree = field(repr=False, compare=False, default=None)


def sample_state(rng: np.random.Generator, w: Workspace, limits: VehicleLimits,
                 goal: Optional[State] = None, goal_bias: float = 0.0) -> State:
    """Uniform free-space state; returns the goal with probability goal_bias."""
    if goal is not None:
        if rng.random() < goal_bias:
            return goal
    b = w.bounds
    for _ in range(_STALL_LIMIT):
        x = rng.uniform(b.xmin, b.xmax)
        y = rng.uniform(b.ymin, b.ymax)
        if w.is_free(x, y):
            theta = rng.uniform(0.0, 2.0 * math.pi)
            v = rng.uniform(limits.v_min, limits.v_max)
            return State.make(x, y, theta, v)
    raise SamplingStalled(f"no free sample in {_STALL_LIMIT} attempts")


def _ordered_costs(a: State, b: State, w: Workspace, limits: VehicleLimits,
                   rp: RiskParams, cfg: PlannerConfig):
    """Candidates with costs, in ascending joint order (enumeration-stable)."""
    cands = gmdm.enumerate_candidates(a, b, limits, cfg.n_speeds)
    costs = timerisk.edge_cost_many(cands, w, rp)
    priced = [(c.joint, i) for i, c in enumerate(costs) if c is not None]
    priced.sort(key=lambda item: item[0])
    return cands, costs, priced


def distance(a: State, b: State, w: Workspace, limits: VehicleLimits,
             rp: RiskParams, cfg: PlannerConfig) -> float:
    """Cheapest candidate joint cost, ignoring obstacles along the way.

    Candidates whose interpolated states fall inside obstacles carry no
    finite cost and are skipped; +inf means no candidate is solvable.
    """
    _, _, priced = _ordered_costs(a, b, w, limits, rp, cfg)
    return priced[0][0] if priced else math.inf


def steer(a: State, b: State, w: Workspace, limits: VehicleLimits,
          rp: RiskParams, cfg: PlannerConfig) -> Optional[Tuple[GmdmPath, EdgeCost]]:
    """Cheapest collision-free connection from a to b, or None.

    Candidates are collision-checked in ascending cost order, so the first
    free one wins; ties resolve to the fixed enumeration order.
    """
    cands, costs, priced = _ordered_costs(a, b, w, limits, rp, cfg)
    for _, i in priced:
        if w.trajectory_is_free(cands[i], cfg.step):
            return cands[i], costs[i]
    return None


def near(tree: Tree, s: State, cfg: PlannerConfig) -> List[int]:
    """Up to k_neighbors node indices within max_connect of s's position,
    ascending by Euclidean distance (ties by index)."""
    xy = tree.positions()
    d = np.hypot(xy[:, 0] - s.x, xy[:, 1] - s.y)
    close = np.flatnonzero(d <= cfg.max_connect)
    if close.size == 0:
        return []
    order = np.lexsort((close, d[close]))
    return [int(i) for i in close[order[: cfg.k_neighbors]]]


def _nearest(tree: Tree, s: State) -> int:
    xy = tree.positions()
    d = np.hypot(xy[:, 0] - s.x, xy[:, 1] - s.y)
    return int(np.argmin(d))


def plan(w: Workspace, limits: VehicleLimits, rp: RiskParams,
         cfg: PlannerConfig, p_start: State, p_goal: State) -> PlanResult:
    """Grow the tree for n_samples iterations and return the best goal chain.

    Each iteration: sample, gate neighbors by position (falling back to the
    single nearest node), pick the parent minimizing cost-to-come plus steer
    cost, insert, rewire neighbors through the new node where that lowers
    their cost-to-come, and attempt a goal connection when the new node lies
    within connection range of the goal. An empty path (not an error) means
    the goal was never connected.
    """
    if not w.is_free(p_start.x, p_start.y):
        raise InvalidEndpoints("start position is not in free space")
    if not w.is_free(p_goal.x, p_goal.y):
        raise InvalidEndpoints("goal position is not in free space")

    rng = np.random.default_rng(np.random.PCG64(cfg.seed))
    tree = Tree(p_start)
    # node index -> (goal edge, its cost); edge is None when the node *is*
    # the goal state. Rewiring later can only cheapen these chains.
    goal_links: Dict[int, Tuple[Optional[GmdmPath], Optional[EdgeCost]]] = {}
    trace: List[float] = []

    def best_goal() -> Tuple[float, Optional[int]]:
        best_cost, best_idx = math.inf, None
        for idx, (_, ec) in goal_links.items():
            total = tree.cost_to_come[idx] + (ec.joint if ec is not None else 0.0)
            if total < best_cost:
                best_cost, best_idx = total, idx
        return best_cost, best_idx

    for _ in range(cfg.n_samples):
        s = sample_state(rng, w, limits, goal=p_goal, goal_bias=cfg.goal_bias)
        if s in tree:
            trace.append(best_goal()[0])
            continue

        neighbors = near(tree, s, cfg)
        if not neighbors:
            neighbors = [_nearest(tree, s)]

        best_parent = None
        best_total = math.inf
        best_edge: Optional[GmdmPath] = None
        best_ec: Optional[EdgeCost] = None
        for idx in neighbors:
            node = tree.nodes[idx]
            # J >= T >= straight-line distance / v_max gives an admissible
            # lower bound, letting most neighbors skip the steering call.
            bound = tree.cost_to_come[idx] + math.hypot(node.x - s.x, node.y - s.y) / limits.v_max
            if bound >= best_total:
                continue
            res = steer(node, s, w, limits, rp, cfg)
            if res is None:
                continue
            total = tree.cost_to_come[idx] + res[1].joint
            if total < best_total:
                best_parent, best_total = idx, total
                best_edge, best_ec = res

        if best_parent is None:
            trace.append(best_goal()[0])
            continue
        new_idx = tree.add(s, best_parent, best_total, best_edge, best_ec)

        for idx in neighbors:
            if idx == best_parent:
                continue
            node = tree.nodes[idx]
            bound = best_total + math.hypot(node.x - s.x, node.y - s.y) / limits.v_max
            if bound >= tree.cost_to_come[idx]:
                continue
            res = steer(s, node, w, limits, rp, cfg)
            if res is None:
                continue
            candidate_cost = best_total + res[1].joint
            if candidate_cost < tree.cost_to_come[idx]:
                tree.reparent(idx, new_idx, res[0], res[1], candidate_cost)

        if math.hypot(s.x - p_goal.x, s.y - p_goal.y) <= cfg.max_connect:
            if s == p_goal:
                goal_links[new_idx] = (None, None)
            else:
                res = steer(s, p_goal, w, limits, rp, cfg)
                if res is not None:
                    goal_links[new_idx] = res
        trace.append(best_goal()[0])

    best_cost, best_idx = best_goal()
    path: List[GmdmPath] = []
    if best_idx is not None:
        for idx in tree.chain_to(best_idx):
            if tree.edge[idx] is not None:
                path.append(tree.edge[idx])
        goal_edge = goal_links[best_idx][0]
        if goal_edge is not None:
            path.append(goal_edge)

    if path:
        edge_costs = _chain_costs(tree, best_idx, goal_links[best_idx][1])
        total = EdgeCost(risk=max(c.risk for c in edge_costs),
                         time=sum(c.time for c in edge_costs),
                         joint=sum(c.joint for c in edge_costs))
    else:
        total = EdgeCost(risk=0.0, time=0.0, joint=math.inf)
    return PlanResult(path=path, total=total, trace=trace,
                      nodes_built=len(tree), tree=tree)


def _chain_costs(tree: Tree, goal_idx: int,
                 goal_ec: Optional[EdgeCost]) -> List[EdgeCost]:
    out = [tree.edge_cost[i] for i in tree.chain_to(goal_idx)
           if tree.edge_cost[i] is not None]
    if goal_ec is not None:
        out.append(goal_ec)
    return out
