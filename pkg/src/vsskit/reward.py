"""Shaped per-step reward: goal, move-to-ball, ball-potential gradient and
energy components combined by a weighted sum.

The potential term is potential-based shaping in the Ng et al. sense: it is
a difference quotient of a bounded potential of the ball position, so its
discounted episode sum telescopes and the optimal policy is unchanged. The
move term is the same construction on the agent-ball distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .physics import FieldSpec, Team, WheelCommand


@dataclass(frozen=True)
class RewardWeights:
    """Component weights. Continuous agents pay the energy penalty; the
    discrete wrapper sets w_e to zero (its commands come from a fixed
    controller the agent cannot meaningfully economize)."""

    w_g: float = 1.0
    w_m: float = 0.02
    w_p: float = 0.08
    w_e: float = 1e-5

    @staticmethod
    def for_discrete() -> "RewardWeights":
        return RewardWeights(w_e=0.0)


@dataclass(frozen=True)
class RewardBreakdown:
    r_goal: float
    r_move: float
    r_potential_grad: float
    r_energy: float
    total: float


def reward_move(agent_pos: Tuple[float, float], ball_pos: Tuple[float, float],
                prev_agent_pos: Tuple[float, float], prev_ball_pos: Tuple[float, float],
                dt: float) -> float:
    """(d_prev - d_now)/dt: positive while the agent closes on the ball."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    d_now = math.hypot(ball_pos[0] - agent_pos[0], ball_pos[1] - agent_pos[1])
    d_prev = math.hypot(prev_ball_pos[0] - prev_agent_pos[0],
                        prev_ball_pos[1] - prev_agent_pos[1])
    return (d_prev - d_now) / dt


def ball_potential(ball_pos: Tuple[float, float], field: FieldSpec,
                   team: Team = Team.BLUE) -> float:
    """((d(g_own, b) - d(g_adv, b))/norm - 1)/2, in [-1, 0].

    -1 at the own goal center, 0 at the adversary goal center; the bound
    follows from the triangle inequality against the goal-center separation.
    """
    g_own, g_adv = field.goal_centers(team)
    d_own = math.hypot(ball_pos[0] - g_own[0], ball_pos[1] - g_own[1])
    d_adv = math.hypot(ball_pos[0] - g_adv[0], ball_pos[1] - g_adv[1])
    return ((d_own - d_adv) / field.normalization_length - 1.0) / 2.0


def reward_potential_grad(bp_now: float, bp_prev: float, dt: float) -> float:
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    return (bp_now - bp_prev) / dt


def reward_energy(cmd: WheelCommand) -> float:
    return -(abs(cmd.left) + abs(cmd.right))


def combine(r_goal: float, r_move: float, r_potential_grad: float,
            r_energy: float, weights: RewardWeights) -> RewardBreakdown:
    """Weighted sum. The total is this exact expression (same operation
    order) so downstream exact-reproduction checks are meaningful."""
    total = (weights.w_g * r_goal + weights.w_m * r_move
             + weights.w_p * r_potential_grad + weights.w_e * r_energy)
    return RewardBreakdown(r_goal=r_goal, r_move=r_move,
                           r_potential_grad=r_potential_grad,
                           r_energy=r_energy, total=total)
