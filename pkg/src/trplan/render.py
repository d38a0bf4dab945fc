"""SVG figures: workspace, search tree, and the final path drawn twice,
once colored by speed and once by risk.

Pure string assembly (SVG 1.1), deterministic output for fixed input.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

from .scenario import Scenario

PANEL = 420.0  # drawing area per panel, px
MARGIN = 46.0
GAP = 24.0

SpeedPoint = Tuple[float, float, float, float]  # x, y, speed, risk


def _lerp_color(c0, c1, u: float) -> str:
    u = min(max(u, 0.0), 1.0)
    r, g, b = (round(c0[i] + (c1[i] - c0[i]) * u) for i in range(3))
    return f"#{r:02x}{g:02x}{b:02x}"


def speed_color(v: float, v_min: float, v_max: float) -> str:
    """Linear blue (slow) to red (fast)."""
    span = v_max - v_min
    u = 0.5 if span <= 0.0 else (v - v_min) / span
    return _lerp_color((30, 60, 230), (230, 40, 30), u)


def risk_color(risk: float, risk_hi: float = 3.0) -> str:
    """Green at risk 1 to red at risk >= risk_hi, log-scaled between."""
    if risk <= 1.0:
        u = 0.0
    else:
        u = math.log(risk) / math.log(risk_hi)
    return _lerp_color((20, 150, 40), (230, 40, 30), u)


class _Panel:
    def __init__(self, scenario: Scenario, x0: float, y0: float, title: str):
        self.s = scenario
        self.x0 = x0
        self.y0 = y0
        self.title = title
        b = scenario.workspace.bounds
        self.scale = PANEL / max(b.width, b.height)

    def to_px(self, x: float, y: float) -> Tuple[float, float]:
        b = self.s.workspace.bounds
        px = self.x0 + (x - b.xmin) * self.scale
        py = self.y0 + PANEL - (y - b.ymin) * self.scale
        return px, py

    def base(self) -> List[str]:
        b = self.s.workspace.bounds
        x, y = self.to_px(b.xmin, b.ymax)
        w = b.width * self.scale
        h = b.height * self.scale
        parts = [f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
                 f'fill="#ffffff" stroke="#222222" stroke-width="1.5"/>']
        for poly in self.s.workspace.obstacles:
            pts = " ".join("{:.2f},{:.2f}".format(*self.to_px(px, py)) for px, py in poly)
            parts.append(f'<polygon points="{pts}" fill="#9aa0a6" stroke="#5f6368" '
                         f'stroke-width="1"/>')
        parts.append(f'<text x="{self.x0 + PANEL / 2:.2f}" y="{self.y0 - 12:.2f}" '
                     f'text-anchor="middle" font-family="sans-serif" font-size="15" '
                     f'fill="#202124">{self.title}</text>')
        return parts

    def markers(self) -> List[str]:
        sx, sy = self.to_px(self.s.start.x, self.s.start.y)
        gx, gy = self.to_px(self.s.goal.x, self.s.goal.y)
        return [
            f'<circle cx="{sx:.2f}" cy="{sy:.2f}" r="5" fill="#1a73e8" stroke="#0b3d91"/>',
            f'<rect x="{gx - 5:.2f}" y="{gy - 5:.2f}" width="10" height="10" '
            f'fill="#f9ab00" stroke="#7c5a00"/>',
        ]

    def tree_layer(self, polylines: Sequence[Sequence[Tuple[float, float]]]) -> List[str]:
        parts = []
        for line in polylines:
            pts = " ".join("{:.2f},{:.2f}".format(*self.to_px(x, y)) for x, y in line)
            parts.append(f'<polyline points="{pts}" fill="none" stroke="#c7cbd1" '
                         f'stroke-width="0.6"/>')
        return parts

    def path_layer(self, points: Sequence[SpeedPoint], by: str) -> List[str]:
        parts = []
        for (x0, y0, v, r), (x1, y1, _, _) in zip(points, points[1:]):
            if by == "speed":
                color = speed_color(v, self.s.limits.v_min, self.s.limits.v_max)
            else:
                color = risk_color(r)
            ax, ay = self.to_px(x0, y0)
            bx, by_ = self.to_px(x1, y1)
            parts.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by_:.2f}" '
                         f'stroke="{color}" stroke-width="2.6" stroke-linecap="round"/>')
        return parts

    def legend(self, gradient_id: str, lo_label: str, hi_label: str) -> List[str]:
        x = self.x0 + PANEL + 10
        y = self.y0 + 40
        h = PANEL - 80
        return [
            f'<rect x="{x:.2f}" y="{y:.2f}" width="14" height="{h:.2f}" '
            f'fill="url(#{gradient_id})" stroke="#444444" stroke-width="0.5"/>',
            f'<text x="{x + 7:.2f}" y="{y - 8:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#202124">{hi_label}</text>',
            f'<text x="{x + 7:.2f}" y="{y + h + 16:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#202124">{lo_label}</text>',
        ]


def render_figure(scenario: Scenario,
                  path_points: Optional[Sequence[SpeedPoint]] = None,
                  tree_polylines: Optional[Sequence[Sequence[Tuple[float, float]]]] = None) -> str:
    """Two-panel SVG: speed-colored path (left) and risk-colored path (right)."""
    legend_w = 46.0
    panel_span = PANEL + legend_w
    width = 2 * panel_span + GAP + 2 * MARGIN
    height = PANEL + 2 * MARGIN

    left = _Panel(scenario, MARGIN, MARGIN, "speed")
    right = _Panel(scenario, MARGIN + panel_span + GAP, MARGIN, "risk")

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        "<defs>",
        '<linearGradient id="grad-speed" x1="0" y1="1" x2="0" y2="0">'
        f'<stop offset="0" stop-color="{speed_color(scenario.limits.v_min, scenario.limits.v_min, scenario.limits.v_max)}"/>'
        f'<stop offset="1" stop-color="{speed_color(scenario.limits.v_max, scenario.limits.v_min, scenario.limits.v_max)}"/>'
        "</linearGradient>",
        '<linearGradient id="grad-risk" x1="0" y1="1" x2="0" y2="0">'
        f'<stop offset="0" stop-color="{risk_color(1.0)}"/>'
        f'<stop offset="0.5" stop-color="{risk_color(math.sqrt(3.0))}"/>'
        f'<stop offset="1" stop-color="{risk_color(3.0)}"/>'
        "</linearGradient>",
        "</defs>",
        f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="#fafafa"/>',
    ]
    for panel, grad, lo, hi in ((left, "grad-speed",
                                 f"{scenario.limits.v_min:g} m/s",
                                 f"{scenario.limits.v_max:g} m/s"),
                                (right, "grad-risk", "1", "&#8805;3")):
        parts.extend(panel.base())
        if tree_polylines:
            parts.extend(panel.tree_layer(tree_polylines))
        if path_points:
            parts.extend(panel.path_layer(path_points, "speed" if grad == "grad-speed" else "risk"))
        parts.extend(panel.markers())
        parts.extend(panel.legend(grad, lo, hi))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
