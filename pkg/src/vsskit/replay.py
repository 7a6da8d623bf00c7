"""Offline SVG replay of rollout logs.

Each log row becomes one numbered file (frame_000000.svg, ...) showing the
arena with goal pockets, the tracked robot as an oriented chassis square, the
ball, the score line and the clock. Rendering is plain string assembly, no
drawing libraries involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple

from .metrics import RolloutRow, read_rollout_log
from .physics import SimParams

FRAME_PATTERN = "frame_%06d.svg"

_MARGIN = 8.0


@dataclass(frozen=True)
class ReplaySummary:
    frames: int
    final_score: Tuple[int, int]


def _pt(x: float, y: float) -> str:
    # world frame is y-up, SVG is y-down
    return f"{x:.3f},{-y:.3f}"


def _arena_outline(params: SimParams) -> str:
    f = params.field
    L, P, W, G = (f.play_half_length, f.pocket_depth,
                  f.half_width, f.goal_half_width)
    corners = [(-L, W), (L, W), (L, G), (L + P, G), (L + P, -G), (L, -G),
               (L, -W), (-L, -W), (-L, -G), (-L - P, -G), (-L - P, G), (-L, G)]
    return " ".join(_pt(x, y) for x, y in corners)


def _robot_shape(row: RolloutRow, params: SimParams) -> Tuple[str, Tuple[float, float]]:
    r = params.robot.body_radius
    s = r / math.sqrt(2.0)  # body_radius is the half-diagonal
    c, n = math.cos(row.theta), math.sin(row.theta)
    corners = [(row.x + c * dx - n * dy, row.y + n * dx + c * dy)
               for dx, dy in ((s, s), (-s, s), (-s, -s), (s, -s))]
    body = " ".join(_pt(x, y) for x, y in corners)
    return body, (row.x + r * c, row.y + r * n)


def render_frame(row: RolloutRow, params: SimParams = SimParams()) -> str:
    f = params.field
    half_x = f.play_half_length + f.pocket_depth
    view = (f"{-half_x - _MARGIN:.1f} {-f.half_width - _MARGIN:.1f} "
            f"{2 * (half_x + _MARGIN):.1f} {2 * (f.half_width + _MARGIN):.1f}")
    body, nose = _robot_shape(row, params)
    return f"""<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}">
<rect x="{-half_x - _MARGIN:.1f}" y="{-f.half_width - _MARGIN:.1f}" width="100%" height="100%" fill="#f6f6f2"/>
<polygon points="{_arena_outline(params)}" fill="#e8f0e8" stroke="#222" stroke-width="1"/>
<line x1="0" y1="{-f.half_width:.3f}" x2="0" y2="{f.half_width:.3f}" stroke="#999" stroke-width="0.5"/>
<circle cx="0" cy="0" r="20" fill="none" stroke="#999" stroke-width="0.5"/>
<polygon points="{body}" fill="#1f77b4" stroke="#0d3a5c" stroke-width="0.5"/>
<line x1="{row.x:.3f}" y1="{-row.y:.3f}" x2="{nose[0]:.3f}" y2="{-nose[1]:.3f}" stroke="#f6f6f2" stroke-width="1"/>
<circle cx="{row.ball_x:.3f}" cy="{-row.ball_y:.3f}" r="{params.ball.radius:.3f}" fill="#ff7f0e" stroke="#8a4a00" stroke-width="0.3"/>
<text x="0" y="{-f.half_width - 2:.1f}" text-anchor="middle" font-family="monospace" font-size="7">{row.score_own} - {row.score_adv}</text>
<text x="0" y="{f.half_width + 6:.1f}" text-anchor="middle" font-family="monospace" font-size="4">ep {row.episode}  t={row.t:.2f}s</text>
</svg>
"""


def replay_log(log_path, out_dir, params: SimParams = SimParams()) -> ReplaySummary:
    """Render every row of a rollout log to numbered SVG files; returns the
    frame count and the score shown on the last frame."""
    rows = read_rollout_log(log_path)
    return replay_rows(rows, out_dir, params)


def replay_rows(rows: Sequence[RolloutRow], out_dir,
                params: SimParams = SimParams()) -> ReplaySummary:
    if not rows:
        raise ValueError("nothing to replay: log has no rows")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, row in enumerate(rows):
        (out / (FRAME_PATTERN % i)).write_text(render_frame(row, params),
                                               encoding="utf-8")
    last = rows[-1]
    return ReplaySummary(frames=len(rows),
                         final_score=(last.score_own, last.score_adv))
