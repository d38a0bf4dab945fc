"""Command-line front end: plan / compare / render.

Exit codes: 0 success, 1 usage problem, 2 scenario validation failure,
3 planner found no path.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import List, Optional

from .errors import InvalidEndpoints, ParseError, ValidationError
from .render import render_figure
from .runner import format_summary, run_compare, run_plan
from .scenario import load_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NO_PATH = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit code 1
        raise _UsageError(message)


def parse_seed_spec(spec: str) -> List[int]:
    """Seed list syntax: '0,1,5' or ranges 'a:b' (half-open), mixable."""
    seeds: List[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i <= lo_i:
                raise ValueError(f"empty seed range {part!r}")
            seeds.extend(range(lo_i, hi_i))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("no seeds given")
    return seeds


def _build_parser() -> _Parser:
    parser = _Parser(prog="trplan",
                     description="Time-risk optimal planning for multi-speed vehicles")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="run the planner on a scenario")
    p_plan.add_argument("--scenario", required=True, help="scenario JSON file")
    p_plan.add_argument("--seed", type=int, default=None)
    p_plan.add_argument("--samples", type=int, default=None)
    p_plan.add_argument("--model", choices=("gmdm", "dubins"), default="gmdm")
    p_plan.add_argument("--out", default="out", help="artifact directory")
    p_plan.add_argument("--svg", action="store_true", help="emit figure.svg")
    p_plan.add_argument("--tree", action="store_true", help="include the search tree in the SVG")

    p_cmp = sub.add_parser("compare", help="GMDM vs single-speed Dubins over seeds")
    p_cmp.add_argument("--scenario", required=True)
    p_cmp.add_argument("--seeds", default=None,
                       help="seed list, e.g. '0,1,2' or '0:20' (default: scenario seed)")
    p_cmp.add_argument("--seed", type=int, default=None, help="single seed shorthand")
    p_cmp.add_argument("--samples", type=int, default=None)
    p_cmp.add_argument("--out", default="out")
    p_cmp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    p_rnd = sub.add_parser("render", help="render a scenario (and optional path CSV) to SVG")
    p_rnd.add_argument("--scenario", required=True)
    p_rnd.add_argument("--path", default=None, help="path.csv from a previous run")
    p_rnd.add_argument("--out", default="out")
    return parser


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    run = run_plan(scenario, out_dir=Path(args.out), model=args.model,
                   seed=args.seed, n_samples=args.samples, svg=args.svg,
                   tree=args.tree)
    stats = run.stats
    if stats["total_time_s"] is None:
        print(f"no path found ({stats['nodes']} nodes); artifacts in {args.out}")
        return EXIT_NO_PATH
    print(f"path found: time {stats['total_time_s']:.3f} s, "
          f"cost {stats['total_cost']:.3f}, max edge risk {stats['max_edge_risk']:.3f}, "
          f"{stats['nodes']} nodes; artifacts in {args.out}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seeds is not None:
        try:
            seeds = parse_seed_spec(args.seeds)
        except ValueError as err:
            raise _UsageError(str(err)) from err
    elif args.seed is not None:
        seeds = [args.seed]
    else:
        seeds = [scenario.planner.seed]
    if args.jobs < 1:
        raise _UsageError("--jobs must be >= 1")
    report = run_compare(scenario, seeds, out_dir=Path(args.out),
                         jobs=args.jobs, n_samples=args.samples)
    print(format_summary(report))
    print(f"report written to {args.out}/compare.json")
    return EXIT_OK


def _load_csv_points(path: str):
    points = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            points.append((float(row["x"]), float(row["y"]),
                           float(row["v"]), float(row["risk"])))
    return points


def _cmd_render(args) -> int:
    scenario = load_scenario(args.scenario)
    points = _load_csv_points(args.path) if args.path else None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / "figure.svg"
    target.write_text(render_figure(scenario, points))
    print(f"figure written to {target}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "plan":
            return _cmd_plan(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_render(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as err:
        print(f"file not found: {err.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, InvalidEndpoints) as err:
        print(f"invalid scenario: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
