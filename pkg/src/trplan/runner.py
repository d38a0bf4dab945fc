"""Run orchestration: single planning runs, artifact emission, and
multi-seed model comparisons.

Artifacts per run: path.csv (interpolated path states with recomputed risk),
stats.json (totals, convergence trace, seed, wall-clock), and optionally a
two-panel SVG figure. Everything except the wall_ms value is a deterministic
function of scenario and seed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import gmdm, planner, render, timerisk
from .planner import PlanResult
from .scenario import Scenario, dubins_mode, parse_scenario, scenario_to_dict

CSV_HEADER = "s,x,y,theta,v,risk"

MODELS = ("gmdm", "dubins")


@dataclass
class RunArtifacts:
    result: PlanResult
    stats: dict
    csv_path: Optional[Path]
    stats_path: Optional[Path]
    svg_path: Optional[Path]


def apply_overrides(scenario: Scenario, seed: Optional[int] = None,
                    n_samples: Optional[int] = None,
                    model: str = "gmdm") -> Scenario:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    cfg = scenario.planner
    if seed is not None or n_samples is not None:
        cfg = dataclasses.replace(cfg,
                                  seed=cfg.seed if seed is None else seed,
                                  n_samples=cfg.n_samples if n_samples is None else n_samples)
        scenario = dataclasses.replace(scenario, planner=cfg)
    if model == "dubins":
        scenario = dubins_mode(scenario)
    return scenario


def path_rows(scenario: Scenario, result: PlanResult) -> List[Tuple[float, float, float, float, float, float]]:
    """CSV rows (s, x, y, theta, v, risk) along the edge chain.

    Each edge contributes its M risk-interpolation states; shared junction
    states appear once. Risk is recomputed per row from the workspace.
    """
    rows = []
    s_base = 0.0
    for i, edge in enumerate(result.path):
        states = gmdm.interpolate_states(edge, scenario.risk.M)
        if i > 0:
            states = states[1:]
        for j, st in enumerate(states):
            offset = (j + 1 if i > 0 else j) * edge.length / (scenario.risk.M - 1)
            risk = timerisk.state_risk(st, scenario.workspace, scenario.risk)
            rows.append((s_base + offset, st.x, st.y, st.theta, st.v, risk))
        s_base += edge.length
    return rows


def _format_csv(rows: Sequence[Tuple[float, ...]]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"


def _trace_json(trace: Sequence[float]) -> List[Optional[float]]:
    return [None if math.isinf(t) else t for t in trace]


def build_stats(result: PlanResult, seed: int, wall_ms: float) -> dict:
    found = bool(result.path)
    return {
        "total_time_s": result.total.time if found else None,
        "total_cost": result.total.joint if found else None,
        "max_edge_risk": result.total.risk if found else None,
        "nodes": result.nodes_built,
        "wall_ms": wall_ms,
        "seed": seed,
        "trace": _trace_json(result.trace),
    }


def _dense_path_points(scenario: Scenario, result: PlanResult,
                       spacing: float = 0.1) -> List[Tuple[float, float, float, float]]:
    points = []
    for edge in result.path:
        n = max(2, int(math.ceil(edge.length / spacing)) + 1)
        ss = np.linspace(0.0, edge.length, n)
        states = gmdm.sample_path(edge, ss)
        risks = _state_risks(scenario, states)
        start = 1 if points else 0
        for row, risk in list(zip(states, risks))[start:]:
            points.append((float(row[0]), float(row[1]), float(row[3]), float(risk)))
    return points


def _state_risks(scenario: Scenario, states: np.ndarray) -> np.ndarray:
    w = scenario.workspace
    d = w.ray_distances(states[:, 0], states[:, 1], states[:, 2])
    t = d / states[:, 3]
    with np.errstate(divide="ignore"):
        return np.where(t < scenario.risk.t_star,
                        1.0 + np.log(scenario.risk.t_star / t), 1.0)


def _tree_polylines(result: PlanResult, spacing: float = 0.4):
    lines = []
    tree = result.tree
    if tree is None:
        return lines
    for edge in tree.edge:
        if edge is None:
            continue
        n = max(2, int(math.ceil(edge.length / spacing)) + 1)
        states = gmdm.sample_path(edge, np.linspace(0.0, edge.length, n))
        lines.append([(float(r[0]), float(r[1])) for r in states])
    return lines


def run_plan(scenario: Scenario, out_dir: Optional[Path] = None,
             model: str = "gmdm", seed: Optional[int] = None,
             n_samples: Optional[int] = None, svg: bool = False,
             tree: bool = False) -> RunArtifacts:
    """Plan once and (optionally) write path.csv / stats.json / figure.svg."""
    scn = apply_overrides(scenario, seed=seed, n_samples=n_samples, model=model)
    t0 = time.perf_counter()
    result = planner.plan(scn.workspace, scn.limits, scn.risk, scn.planner,
                          scn.start, scn.goal)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    stats = build_stats(result, scn.planner.seed, wall_ms)

    csv_path = stats_path = svg_path = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / "path.csv"
        csv_path.write_text(_format_csv(path_rows(scn, result)))
        stats_path = out_dir / "stats.json"
        stats_path.write_text(json.dumps(stats, indent=2) + "\n")
        if svg:
            svg_path = out_dir / "figure.svg"
            points = _dense_path_points(scn, result) if result.path else None
            polylines = _tree_polylines(result) if tree else None
            svg_path.write_text(render.render_figure(scn, points, polylines))
    return RunArtifacts(result=result, stats=stats, csv_path=csv_path,
                        stats_path=stats_path, svg_path=svg_path)


def _compare_worker(args: Tuple[dict, int, str, Optional[int]]) -> dict:
    doc, seed, model, n_samples = args
    scenario = parse_scenario(doc)
    run = run_plan(scenario, out_dir=None, model=model, seed=seed,
                   n_samples=n_samples)
    stats = run.stats
    return {
        "seed": seed,
        "model": model,
        "success": stats["total_time_s"] is not None,
        "total_time_s": stats["total_time_s"],
        "total_cost": stats["total_cost"],
        "max_edge_risk": stats["max_edge_risk"],
        "nodes": stats["nodes"],
        "trace": stats["trace"],
    }


def _median(vals: List[float]) -> Optional[float]:
    return statistics.median(vals) if vals else None


def summarize_rows(rows: List[dict]) -> dict:
    """Per-model medians and success rates from per-seed rows."""
    summary = {}
    for model in MODELS:
        mrows = [r for r in rows if r["model"] == model]
        ok = [r for r in mrows if r["success"]]
        summary[model] = {
            "runs": len(mrows),
            "success_rate": len(ok) / len(mrows) if mrows else 0.0,
            "median_time_s": _median([r["total_time_s"] for r in ok]),
            "median_cost": _median([r["total_cost"] for r in ok]),
            "median_max_risk": _median([r["max_edge_risk"] for r in ok]),
        }
    return summary


def run_compare(scenario: Scenario, seeds: Sequence[int],
                out_dir: Optional[Path] = None, jobs: int = 1,
                n_samples: Optional[int] = None,
                keep_traces: bool = False) -> dict:
    """Run both models per seed and report per-seed rows plus medians.

    Seeds may run in separate processes (each run stays internally
    deterministic); rows are assembled in (seed, model) order regardless.
    """
    if not seeds:
        raise ValueError("need at least one seed")
    doc = scenario_to_dict(scenario)
    tasks = [(doc, seed, model, n_samples) for seed in seeds for model in MODELS]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_compare_worker, tasks))
    else:
        rows = [_compare_worker(t) for t in tasks]
    rows.sort(key=lambda r: (r["seed"], r["model"]))
    if not keep_traces:
        for r in rows:
            r.pop("trace")

    report = {"seeds": list(seeds), "rows": rows, "summary": summarize_rows(rows)}
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "compare.json").write_text(json.dumps(report, indent=2) + "\n")
        (out_dir / "compare.csv").write_text(_compare_csv(rows))
    return report


def _compare_csv(rows: List[dict]) -> str:
    lines = ["seed,model,success,total_time_s,total_cost,max_edge_risk,nodes"]
    for r in rows:
        vals = [str(r["seed"]), r["model"], str(int(r["success"]))]
        for key in ("total_time_s", "total_cost", "max_edge_risk"):
            vals.append("" if r[key] is None else repr(r[key]))
        vals.append(str(r["nodes"]))
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def format_summary(report: dict) -> str:
    lines = ["model   runs  success  med_time_s  med_cost  med_max_risk"]
    for model in MODELS:
        s = report["summary"][model]

        def fmt(v):
            return "   n/a" if v is None else f"{v:8.3f}"

        lines.append(f"{model:<7} {s['runs']:4d}  {s['success_rate']:7.2f} "
                     f"{fmt(s['median_time_s'])}  {fmt(s['median_cost'])}  "
                     f"{fmt(s['median_max_risk'])}")
    return "\n".join(lines)
