"""Scripted example agent: drive one robot straight at the ball.

Reimplements the simulator's stock go-to-point law on the client side of
the wire, from raw state values only: proportional heading control
saturating at the spin cap, speed proportional to distance up to a
saturation radius, and bidirectional drive (when the ball sits more than
90 degrees off the nose the robot backs into it instead of turning
around). On an empty field this is enough to dribble the ball into the
goal; it exists to prove the loop decode -> decide -> encode end to end,
not to play good soccer.
"""

from __future__ import annotations

import math
from typing import Tuple

from .wire import StateView

K_THETA = 5.0        # rad/s per rad of heading error
K_V = 3.0            # (cm/s) per cm of distance
D_SAT = 30.0         # speed saturation radius, cm
V_MAX = 150.0        # wheel speed cap, cm/s
OMEGA_MAX = 40.0     # spin cap, rad/s
AXLE_LENGTH = 7.5    # wheel separation, cm


def _wrap(theta: float) -> float:
    theta = math.remainder(theta, 2.0 * math.pi)
    if theta <= -math.pi:
        theta += 2.0 * math.pi
    return theta


def wheels_from_twist(v: float, omega: float) -> Tuple[float, float]:
    """(v, omega) -> per-wheel channel values in [-100, 100]. Overflow
    rescales both channels together, preserving curvature."""
    half = 0.5 * omega * AXLE_LENGTH
    c_l = 100.0 * (v - half) / V_MAX
    c_r = 100.0 * (v + half) / V_MAX
    peak = max(abs(c_l), abs(c_r))
    if peak > 100.0:
        c_l *= 100.0 / peak
        c_r *= 100.0 / peak
    return c_l, c_r


def chase_wheels(state: StateView, robot_id: int = 0,
                 team: int = 0) -> Tuple[float, float]:
    """Wheel channels steering the given robot at the current ball
    position. Raises ValueError when the robot is not in the state."""
    robots = state.robots_blue if team == 0 else state.robots_yellow
    robot = next((r for r in robots if r.id == robot_id), None)
    if robot is None:
        raise ValueError(f"robot id {robot_id} not in state for team {team}")
    dx = state.ball[0] - robot.x
    dy = state.ball[1] - robot.y
    dist = math.hypot(dx, dy)
    if dist < 1e-12:
        return 0.0, 0.0
    err = _wrap(math.atan2(dy, dx) - robot.theta)
    direction = 1.0
    if abs(err) > 0.5 * math.pi:
        err = _wrap(err - math.pi)
        direction = -1.0
    omega = min(OMEGA_MAX, max(-OMEGA_MAX, K_THETA * err))
    v = direction * K_V * min(dist, D_SAT) * math.cos(err)
    v = min(V_MAX, max(-V_MAX, v))
    return wheels_from_twist(v, omega)
