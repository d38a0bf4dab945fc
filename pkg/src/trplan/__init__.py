"""Time-risk optimal motion planning for variable-speed, curvature-bounded
vehicles: multi-speed Dubins steering, ray-cast collision risk, and an
asymptotically optimal sampling-based planner."""

from .environment import Bounds, Workspace
from .gmdm import (GmdmPath, MotionPrimitive, Pose, State, VehicleLimits,
                   apply_primitive, enumerate_candidates, interpolate_states,
                   point_at, solve_ccc, solve_csc)
from .planner import PlannerConfig, PlanResult, Tree, distance, near, plan, sample_state, steer
from .scenario import Scenario, load_scenario, save_scenario
from .timerisk import (EdgeCost, RiskParams, collision_time, edge_cost,
                       edge_risk, edge_time, state_risk)

__all__ = [
    "Bounds", "Workspace",
    "GmdmPath", "MotionPrimitive", "Pose", "State", "VehicleLimits",
    "apply_primitive", "enumerate_candidates", "interpolate_states",
    "point_at", "solve_ccc", "solve_csc",
    "PlannerConfig", "PlanResult", "Tree",
    "distance", "near", "plan", "sample_state", "steer",
    "Scenario", "load_scenario", "save_scenario",
    "EdgeCost", "RiskParams", "collision_time", "edge_cost", "edge_risk",
    "edge_time", "state_risk",
]

__version__ = "0.1.0"
