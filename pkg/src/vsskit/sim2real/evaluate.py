"""Closed-loop comparison of adapted and non-adapted control on a
perturbed plant.

Three arms share the same spawn sequence: the scripted striker on the
clean plant (baseline), on the perturbed plant driven raw, and on the
perturbed plant driven through the inverse-dynamics adaptor. Episodes a
robot fails to win (timeout or conceded goal) are charged the full frame
budget, so an arm cannot look fast by losing quickly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from ..action import continuous_to_wheels
from ..env import ActionMode, EpisodeConfig, ResetMode, SoccerEnv
from ..physics import SimParams, Team
from ..policies import GotoBallGoal
from .net import MLPParams, adapt
from .plant import PseudoRealPlant, identity_plant


@dataclass
class EvalArm:
    name: str
    steps: np.ndarray
    goals: int
    own_goals: int
    timeouts: int

    @property
    def episodes(self) -> int:
        return len(self.steps)

    @property
    def mean_steps(self) -> float:
        return float(np.mean(self.steps))

    @property
    def sd_steps(self) -> float:
        return float(np.std(self.steps, ddof=1)) if len(self.steps) > 1 else 0.0


@dataclass
class EvalReport:
    clean: EvalArm
    raw: EvalArm
    adapted: EvalArm
    ratio: float
    t_stat: float
    p_value: float


def run_arm(name: str, policy, plant: PseudoRealPlant, adaptor: Optional[MLPParams],
            episodes: int, seed: int, max_duration: float = 300.0,
            params: SimParams = SimParams()) -> EvalArm:
    """Run a planning policy (anything with plan(world, params, team, rid)
    -> HighLevelAction) for `episodes` random spawns. Spawns depend only on
    (seed, episode index), so arms with the same seed are paired."""
    config = EpisodeConfig(max_duration=max_duration, n_per_team=1, n_opponents=0,
                           end_on_goal=True, reset_mode=ResetMode.UNIFORM_RANDOM,
                           seed=seed)
    env = SoccerEnv(config, params, action_mode=ActionMode.WHEEL)
    v_max = params.robot.v_max
    axle = params.robot.axle_length

    steps = np.zeros(episodes, dtype=np.int64)
    goals = own_goals = timeouts = 0
    for ep in range(episodes):
        env.command_filter = plant.make_filter(np.random.SeedSequence(seed, spawn_key=(ep, 1)))
        env.reset(seed=np.random.SeedSequence(seed, spawn_key=(ep,)))
        obs_prev = (0.0, 0.0)
        n = 0
        goal = None
        while not env.done:
            action = policy.plan(env.world, params, Team.BLUE, 0)
            if adaptor is None:
                cmd = continuous_to_wheels(action, axle, v_max)
            else:
                cmd = adapt(adaptor, action, obs_prev, v_max)
            result = env.step([cmd])
            obs_prev = result.info["observed"][0]
            goal = result.info["goal"]
            n += 1
        if goal is Team.BLUE:
            goals += 1
            steps[ep] = n
        else:
            # Conceded goals and timeouts both cost the full budget.
            if goal is Team.YELLOW:
                own_goals += 1
            else:
                timeouts += 1
            steps[ep] = config.max_frames
    return EvalArm(name=name, steps=steps, goals=goals,
                   own_goals=own_goals, timeouts=timeouts)


def eval_closed_loop(policy=None, plant: PseudoRealPlant = PseudoRealPlant(),
                     adaptor: Optional[MLPParams] = None,
                     episodes: int = 30, seed: int = 500,
                     max_duration: float = 300.0,
                     params: SimParams = SimParams()) -> EvalReport:
    """Three-arm comparison. ratio is adapted/raw mean steps-to-goal; the
    Welch t-test compares adapted against the clean baseline (a large p is
    the desired outcome: no detectable regression)."""
    if policy is None:
        policy = GotoBallGoal()
    clean = run_arm("clean", policy, identity_plant(), None, episodes, seed,
                    max_duration, params)
    raw = run_arm("raw", policy, plant, None, episodes, seed, max_duration, params)
    adapted = run_arm("adapted", policy, plant, adaptor, episodes, seed,
                      max_duration, params)
    ratio = adapted.mean_steps / raw.mean_steps if raw.mean_steps > 0 else float("nan")
    welch = stats.ttest_ind(adapted.steps, clean.steps, equal_var=False)
    return EvalReport(clean=clean, raw=raw, adapted=adapted, ratio=ratio,
                      t_stat=float(welch.statistic), p_value=float(welch.pvalue))


def format_report(report: EvalReport) -> str:
    lines = [f"{'arm':<10}{'episodes':>9}{'goals':>7}{'own':>5}{'t/o':>5}"
             f"{'mean steps':>12}{'sd':>10}"]
    for arm in (report.clean, report.raw, report.adapted):
        lines.append(f"{arm.name:<10}{arm.episodes:>9}{arm.goals:>7}{arm.own_goals:>5}"
                     f"{arm.timeouts:>5}{arm.mean_steps:>12.1f}{arm.sd_steps:>10.1f}")
    lines.append(f"adapted/raw mean-steps ratio: {report.ratio:.3f}")
    lines.append(f"Welch t-test adapted vs clean: t = {report.t_stat:.3f}, "
                 f"p = {report.p_value:.3f}")
    return "\n".join(lines)
