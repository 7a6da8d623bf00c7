"""Run metrics: steps-to-goal statistics, windowed goal score, per-episode
reward tallies.

Rollout log schema, one CSV row per control step for the tracked robot:

    episode,step,t,ball_x,ball_y,ball_vx,ball_vy,x,y,theta,vx,vy,omega,
    v_d,w_d,v_obs,w_obs,vl_cmd,vr_cmd,
    r_goal,r_move,r_potential_grad,r_energy,reward,goal,score_own,score_adv

The v_d..vr_cmd block matches the adaptor trajectory logs so the same tooling
consumes either. ``goal`` is empty except on rows where a goal landed ("blue"
or "yellow"); scores are running totals after the step. Floats are written
with repr() so a re-read reproduces exact binary values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

ROLLOUT_HEADER = ("episode,step,t,ball_x,ball_y,ball_vx,ball_vy,"
                  "x,y,theta,vx,vy,omega,v_d,w_d,v_obs,w_obs,vl_cmd,vr_cmd,"
                  "r_goal,r_move,r_potential_grad,r_energy,reward,"
                  "goal,score_own,score_adv")

REWARD_COLUMNS = ("r_goal", "r_move", "r_potential_grad", "r_energy", "reward")

_N_FIELDS = len(ROLLOUT_HEADER.split(","))
_FLOAT_SLICE = slice(2, 24)  # t .. reward


@dataclass(frozen=True)
class RolloutRow:
    episode: int
    step: int
    t: float
    ball_x: float
    ball_y: float
    ball_vx: float
    ball_vy: float
    x: float
    y: float
    theta: float
    vx: float
    vy: float
    omega: float
    v_d: float
    w_d: float
    v_obs: float
    w_obs: float
    vl_cmd: float
    vr_cmd: float
    r_goal: float
    r_move: float
    r_potential_grad: float
    r_energy: float
    reward: float
    goal: str  # "", "blue" or "yellow"
    score_own: int
    score_adv: int


def write_rollout_log(rows: Sequence[RolloutRow], path) -> None:
    names = ROLLOUT_HEADER.split(",")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(ROLLOUT_HEADER + "\n")
        for r in rows:
            parts = []
            for name in names:
                v = getattr(r, name)
                parts.append(repr(v) if isinstance(v, float) else str(v))
            fh.write(",".join(parts) + "\n")


def read_rollout_log(path) -> List[RolloutRow]:
    rows: List[RolloutRow] = []
    try:
        return _read_rollout_log(path, rows)
    except UnicodeDecodeError as exc:
        raise ValueError(f"{path}: not a text log ({exc})") from exc


def _read_rollout_log(path, rows: List[RolloutRow]) -> List[RolloutRow]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != ROLLOUT_HEADER:
            raise ValueError(f"{path}: bad or missing header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != _N_FIELDS:
                raise ValueError(
                    f"{path}:{lineno}: expected {_N_FIELDS} fields, got {len(parts)}")
            goal = parts[24]
            if goal not in ("", "blue", "yellow"):
                raise ValueError(f"{path}:{lineno}: bad goal field {goal!r}")
            try:
                episode, step = int(parts[0]), int(parts[1])
                floats = [float(p) for p in parts[_FLOAT_SLICE]]
                score_own, score_adv = int(parts[25]), int(parts[26])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from exc
            if not all(math.isfinite(v) for v in floats):
                raise ValueError(f"{path}:{lineno}: non-finite value")
            rows.append(RolloutRow(episode, step, *floats, goal,
                                   score_own, score_adv))
    return rows


def windowed_goal_score(goal_events: np.ndarray, window: int = 100) -> np.ndarray:
    """score[t] = signed goals landing within the next `window` steps,
    i.e. sum of goal_events[t : t + window]. A single +1 event at step k
    yields +1 for t in [k - window + 1, k] and 0 elsewhere."""
    if window < 1:
        raise ValueError("window must be at least 1")
    g = np.asarray(goal_events, dtype=np.float64)
    if g.ndim != 1:
        raise ValueError("goal_events must be a 1-d array")
    if g.size == 0:
        return np.zeros(0)
    full = np.convolve(g, np.ones(window))
    return full[window - 1:window - 1 + g.size]


@dataclass(eq=False)
class MetricsReport:
    episodes: int
    n_scoring: int  # episodes with at least one blue goal
    steps_to_goal_mean: Optional[float]
    steps_to_goal_sd: Optional[float]
    goal_score: np.ndarray
    reward_sums: List[Dict[str, float]]
    final_score: Tuple[int, int]
    window: int = 100

    def to_dict(self) -> Dict[str, object]:
        return {
            "episodes": self.episodes,
            "n_scoring": self.n_scoring,
            "steps_to_goal_mean": self.steps_to_goal_mean,
            "steps_to_goal_sd": self.steps_to_goal_sd,
            "goal_score": [float(v) for v in self.goal_score],
            "reward_sums": self.reward_sums,
            "final_score": list(self.final_score),
            "window": self.window,
        }

    def render(self) -> str:
        lines = [f"episodes        {self.episodes}"]
        if self.steps_to_goal_mean is None:
            lines.append("steps to goal   undefined (no goals scored)")
        else:
            lines.append(f"steps to goal   {self.steps_to_goal_mean:.2f} "
                         f"+/- {self.steps_to_goal_sd:.2f} "
                         f"over {self.n_scoring} scoring episodes")
        lines.append(f"final score     {self.final_score[0]}-{self.final_score[1]}")
        lines.append(f"goal score      window {self.window}, "
                     f"peak {self.goal_score.max() if self.goal_score.size else 0.0:+.0f}")
        lines.append("reward sums per episode:")
        header = "  ep " + " ".join(f"{c:>18}" for c in REWARD_COLUMNS)
        lines.append(header)
        for i, sums in enumerate(self.reward_sums):
            lines.append(f"  {i:2d} " + " ".join(
                f"{sums[c]:18.6f}" for c in REWARD_COLUMNS))
        return "\n".join(lines)


def metrics_from_rows(rows: Sequence[RolloutRow], window: int = 100) -> MetricsReport:
    """Aggregate a rollout log. Steps-to-goal counts control steps from
    episode start through the first blue goal; episodes without a blue goal
    contribute nothing (undefined when no episode scores)."""
    if not rows:
        return MetricsReport(0, 0, None, None, np.zeros(0), [], (0, 0), window)
    order: List[int] = []
    by_episode: Dict[int, List[RolloutRow]] = {}
    for row in rows:
        if row.episode not in by_episode:
            by_episode[row.episode] = []
            order.append(row.episode)
        by_episode[row.episode].append(row)

    steps_to_goal: List[float] = []
    reward_sums: List[Dict[str, float]] = []
    events: List[float] = []
    for ep in order:
        ep_rows = by_episode[ep]
        sums = {c: 0.0 for c in REWARD_COLUMNS}
        first_blue: Optional[int] = None
        for i, row in enumerate(ep_rows):
            for c in REWARD_COLUMNS:
                sums[c] += getattr(row, c)
            if row.goal == "blue":
                events.append(1.0)
                if first_blue is None:
                    first_blue = i
            elif row.goal == "yellow":
                events.append(-1.0)
            else:
                events.append(0.0)
        if first_blue is not None:
            steps_to_goal.append(float(first_blue + 1))
        reward_sums.append(sums)

    n_scoring = len(steps_to_goal)
    if n_scoring == 0:
        mean = sd = None
    else:
        mean = float(np.mean(steps_to_goal))
        sd = float(np.std(steps_to_goal, ddof=1)) if n_scoring > 1 else 0.0
    last = by_episode[order[-1]][-1]
    return MetricsReport(
        episodes=len(order), n_scoring=n_scoring,
        steps_to_goal_mean=mean, steps_to_goal_sd=sd,
        goal_score=windowed_goal_score(np.array(events), window),
        reward_sums=reward_sums,
        final_score=(last.score_own, last.score_adv), window=window)


def metrics_from_log(path, window: int = 100) -> MetricsReport:
    return metrics_from_rows(read_rollout_log(path), window)
