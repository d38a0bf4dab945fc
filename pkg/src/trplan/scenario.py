"""Scenario files: JSON schema, validation, and canonical serialization.

A scenario bundles the workspace, endpoint states, vehicle limits, risk
parameters, and planner configuration. Parsing distinguishes malformed
structure (ParseError) from invariant violations (ValidationError, whose
message names the offending field). Serialization is canonical: loading a
written scenario reproduces it exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .environment import Bounds, Workspace
from .errors import ParseError, ValidationError
from .gmdm import State, VehicleLimits
from .planner import PlannerConfig
from .timerisk import RiskParams

_PLANNER_DEFAULTS = dict(n_samples=3000, k_neighbors=100, max_connect=3.0,
                         n_speeds=3, step=0.05, goal_bias=0.05, seed=0)
_DEFAULT_M = 4


@dataclass(frozen=True)
class Scenario:
    workspace: Workspace
    start: State
    goal: State
    limits: VehicleLimits
    risk: RiskParams
    planner: PlannerConfig


def _require(mapping: dict, key: str, path: str) -> object:
    if not isinstance(mapping, dict):
        raise ParseError(f"{path}: expected an object")
    if key not in mapping:
        raise ParseError(f"{path}.{key}: missing required field")
    return mapping[key]


def _number(value: object, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {type(value).__name__}")
    return float(value)

def _integer(value: object, path: str) -> int:
    if isinstance(value, bool):
        raise ParseError(f"{path}: expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ParseError(f"{path}: expected an integer, got {value!r}")


def _check(condition: bool, fieldname: str, message: str) -> None:
    if not condition:
        raise ValidationError(fieldname, message)


def _parse_state(d: dict, path: str) -> State:
    return State.make(_number(_require(d, "x", path), f"{path}.x"),
                      _number(_require(d, "y", path), f"{path}.y"),
                      _number(_require(d, "theta", path), f"{path}.theta"),
                      _number(_require(d, "v", path), f"{path}.v"))


def parse_scenario(doc: dict) -> Scenario:
    """Build a validated Scenario from a parsed JSON document."""
    ws = _require(doc, "workspace", "scenario")
    bounds_d = _require(ws, "bounds", "workspace")
    bounds_vals = {k: _number(_require(bounds_d, k, "workspace.bounds"),
                              f"workspace.bounds.{k}")
                   for k in ("xmin", "ymin", "xmax", "ymax")}
    _check(bounds_vals["xmax"] > bounds_vals["xmin"]
           and bounds_vals["ymax"] > bounds_vals["ymin"],
           "workspace.bounds", "must have positive extent")
    bounds = Bounds(**bounds_vals)

    obstacles_raw = ws.get("obstacles", [])
    if not isinstance(obstacles_raw, list):
        raise ParseError("workspace.obstacles: expected a list of polygons")
    obstacles = []
    for i, poly in enumerate(obstacles_raw):
        if not isinstance(poly, list):
            raise ParseError(f"workspace.obstacles[{i}]: expected a vertex list")
        verts = []
        for j, pt in enumerate(poly):
            if not isinstance(pt, list) or len(pt) != 2:
                raise ParseError(f"workspace.obstacles[{i}][{j}]: expected [x, y]")
            verts.append((_number(pt[0], f"workspace.obstacles[{i}][{j}].x"),
                          _number(pt[1], f"workspace.obstacles[{i}][{j}].y")))
        obstacles.append(tuple(verts))
    try:
        workspace = Workspace(bounds, obstacles)
    except ValueError as err:
        raise ValidationError("workspace.obstacles", str(err)) from err

    lim = _require(doc, "limits", "scenario")
    v_min = _number(_require(lim, "v_min", "limits"), "limits.v_min")
    v_max = _number(_require(lim, "v_max", "limits"), "limits.v_max")
    u_max = _number(_require(lim, "u_max", "limits"), "limits.u_max")
    _check(v_min > 0.0, "limits.v_min", "must be > 0")
    _check(v_min <= v_max, "limits.v_min", "must not exceed limits.v_max")
    _check(u_max > 0.0, "limits.u_max", "must be > 0")
    limits = VehicleLimits(v_min=v_min, v_max=v_max, u_max=u_max)

    risk_d = _require(doc, "risk", "scenario")
    t_star = _number(_require(risk_d, "t_star", "risk"), "risk.t_star")
    k = _number(_require(risk_d, "k", "risk"), "risk.k")
    m_count = _integer(risk_d.get("M", _DEFAULT_M), "risk.M")
    _check(t_star > 0.0, "risk.t_star", "must be > 0")
    _check(k >= 0.0, "risk.k", "must be >= 0")
    _check(m_count >= 2, "risk.M", "must be >= 2")
    risk = RiskParams(t_star=t_star, k=k, M=m_count)

    pl = doc.get("planner", {})
    if not isinstance(pl, dict):
        raise ParseError("planner: expected an object")
    pvals = dict(_PLANNER_DEFAULTS)
    for key in ("n_samples", "k_neighbors", "n_speeds", "seed"):
        if key in pl:
            pvals[key] = _integer(pl[key], f"planner.{key}")
    for key in ("max_connect", "step", "goal_bias"):
        if key in pl:
            pvals[key] = _number(pl[key], f"planner.{key}")
    _check(pvals["n_samples"] >= 1, "planner.n_samples", "must be >= 1")
    _check(pvals["k_neighbors"] >= 1, "planner.k_neighbors", "must be >= 1")
    _check(pvals["max_connect"] > 0.0, "planner.max_connect", "must be > 0")
    _check(pvals["n_speeds"] >= 2, "planner.n_speeds", "must be >= 2")
    _check(pvals["step"] > 0.0, "planner.step", "must be > 0")
    _check(0.0 <= pvals["goal_bias"] < 1.0, "planner.goal_bias", "must be in [0, 1)")
    planner_cfg = PlannerConfig(**pvals)

    start = _parse_state(_require(doc, "start", "scenario"), "start")
    goal = _parse_state(_require(doc, "goal", "scenario"), "goal")
    for name, st in (("start", start), ("goal", goal)):
        _check(limits.v_min <= st.v <= limits.v_max, f"{name}.v",
               f"must lie in [{limits.v_min}, {limits.v_max}]")
        _check(workspace.is_free(st.x, st.y), name,
               "position is not in free space")

    return Scenario(workspace=workspace, start=start, goal=goal,
                    limits=limits, risk=risk, planner=planner_cfg)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Parse and validate a scenario JSON file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: invalid JSON ({err})") from err
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    return parse_scenario(doc)


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical plain-data form (fixed key order, all fields explicit)."""
    return {
        "workspace": {
            "bounds": {"xmin": s.workspace.bounds.xmin,
                       "ymin": s.workspace.bounds.ymin,
                       "xmax": s.workspace.bounds.xmax,
                       "ymax": s.workspace.bounds.ymax},
            "obstacles": [[[x, y] for x, y in poly] for poly in s.workspace.obstacles],
        },
        "start": {"x": s.start.x, "y": s.start.y, "theta": s.start.theta, "v": s.start.v},
        "goal": {"x": s.goal.x, "y": s.goal.y, "theta": s.goal.theta, "v": s.goal.v},
        "limits": {"v_min": s.limits.v_min, "v_max": s.limits.v_max, "u_max": s.limits.u_max},
        "risk": {"t_star": s.risk.t_star, "k": s.risk.k, "M": s.risk.M},
        "planner": {"n_samples": s.planner.n_samples,
                    "k_neighbors": s.planner.k_neighbors,
                    "max_connect": s.planner.max_connect,
                    "n_speeds": s.planner.n_speeds,
                    "step": s.planner.step,
                    "goal_bias": s.planner.goal_bias,
                    "seed": s.planner.seed},
    }


def save_scenario(s: Scenario, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def dubins_mode(s: Scenario) -> Scenario:
    """Single-speed variant: every speed pinned to v_max.

    The speed interval collapses so sampling, endpoints, and the middle-speed
    grid all sit at maximum speed; the model then reduces to a classical
    fixed-radius Dubins vehicle.
    """
    limits = VehicleLimits(v_min=s.limits.v_max, v_max=s.limits.v_max,
                           u_max=s.limits.u_max)
    return Scenario(workspace=s.workspace,
                    start=State(s.start.pose, limits.v_max),
                    goal=State(s.goal.pose, limits.v_max),
                    limits=limits, risk=s.risk, planner=s.planner)
