"""Agent-facing action layers.

Two abstractions over raw wheel commands: a continuous (v, omega) twist
mapped through differential-drive kinematics, and a discrete wrapper that
steers a virtual target point in polar coordinates about the robot, tracked
by a fixed bidirectional go-to-point controller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

from .physics import Pose2D, WheelCommand, wrap_angle

TARGET_ROTATION_STEP = math.pi / 12.0  # 15 degrees
TARGET_RADIUS_STEP = 12.0  # cm


@dataclass(frozen=True)
class ActionConfig:
    """Envelope and controller constants for the action layers."""

    v_max: float = 150.0
    omega_max: float = 40.0
    k_theta: float = 5.0
    k_v: float = 3.0
    d_sat: float = 30.0
    r_max: float = math.hypot(170.0, 130.0)  # arena diagonal

    def __post_init__(self):
        for name in ("v_max", "omega_max", "k_theta", "k_v", "d_sat", "r_max"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"ActionConfig.{name} must be positive")


@dataclass(frozen=True)
class HighLevelAction:
    """Desired linear and angular speed of the chassis."""

    v: float
    omega: float

    def clamped(self, config: ActionConfig) -> "HighLevelAction":
        return HighLevelAction(
            v=min(config.v_max, max(-config.v_max, self.v)),
            omega=min(config.omega_max, max(-config.omega_max, self.omega)),
        )


class DiscreteAction(IntEnum):
    """Five virtual-target moves. Values double as the wire encoding."""

    KEEP = 1
    ROTATE_CW = 2     # phi - 15 degrees
    ROTATE_CCW = 3    # phi + 15 degrees
    EXTEND = 4        # r + 12 cm
    RETRACT = 5       # r - 12 cm


@dataclass(frozen=True)
class VirtualTarget:
    """Polar target (r, phi) anchored at the agent's current position.
    phi is a field-frame bearing, so KEEP is a no-op under robot rotation."""

    r: float
    phi: float

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError("target radius cannot be negative")
        object.__setattr__(self, "phi", wrap_angle(self.phi))

    def to_point(self, pose: Pose2D) -> Tuple[float, float]:
        return (pose.x + self.r * math.cos(self.phi),
                pose.y + self.r * math.sin(self.phi))


def twist_to_wheel_speeds(v: float, omega: float, axle_length: float) -> Tuple[float, float]:
    """Inverse kinematics: (v, omega) -> (V_l, V_r) in cm/s."""
    if axle_length <= 0.0:
        raise ValueError("axle_length must be positive")
    half = 0.5 * omega * axle_length
    return (v - half, v + half)


def wheel_speeds_to_twist(v_l: float, v_r: float, axle_length: float) -> Tuple[float, float]:
    """Forward kinematics: (V_l, V_r) -> (v, omega)."""
    if axle_length <= 0.0:
        raise ValueError("axle_length must be positive")
    return (0.5 * (v_l + v_r), (v_r - v_l) / axle_length)


def wheel_speeds_to_command(v_l: float, v_r: float, v_max: float) -> WheelCommand:
    """Map wheel speeds to [-100, 100] channel values.

    On overflow both channels are scaled down by the same factor, which
    preserves the curvature and in particular the sign of V_r - V_l.
    """
    c_l = 100.0 * v_l / v_max
    c_r = 100.0 * v_r / v_max
    peak = max(abs(c_l), abs(c_r))
    if peak > 100.0:
        scale = 100.0 / peak
        c_l *= scale
        c_r *= scale
    return WheelCommand(c_l, c_r)


def continuous_to_wheels(action: HighLevelAction, axle_length: float,
                         v_max: float = 150.0) -> WheelCommand:
    v_l, v_r = twist_to_wheel_speeds(action.v, action.omega, axle_length)
    return wheel_speeds_to_command(v_l, v_r, v_max)


def apply_discrete(target: VirtualTarget, action: DiscreteAction,
                   r_max: float = ActionConfig.r_max) -> VirtualTarget:
    """a1 keep; a2/a3 rotate phi by -/+ 15 degrees; a4/a5 grow/shrink r by
    12 cm, clamped to [0, r_max]."""
    action = DiscreteAction(action)
    if action is DiscreteAction.KEEP:
        return target
    if action is DiscreteAction.ROTATE_CW:
        return VirtualTarget(target.r, target.phi - TARGET_ROTATION_STEP)
    if action is DiscreteAction.ROTATE_CCW:
        return VirtualTarget(target.r, target.phi + TARGET_ROTATION_STEP)
    if action is DiscreteAction.EXTEND:
        return VirtualTarget(min(r_max, target.r + TARGET_RADIUS_STEP), target.phi)
    return VirtualTarget(max(0.0, target.r - TARGET_RADIUS_STEP), target.phi)


def goto_controller(pose: Pose2D, target_point: Tuple[float, float],
                    config: ActionConfig = ActionConfig()) -> HighLevelAction:
    """Bidirectional proportional go-to-point.

    When the target lies more than 90 degrees off the nose the robot drives
    its tail toward it instead of turning around (the chassis is fore-aft
    symmetric): the heading error is taken against the antipode and v flips
    sign. Speed saturates at k_v * d_sat.
    """
    dx = target_point[0] - pose.x
    dy = target_point[1] - pose.y
    dist = math.hypot(dx, dy)
    if dist < 1e-12:
        return HighLevelAction(0.0, 0.0)
    err = wrap_angle(math.atan2(dy, dx) - pose.theta)
    if abs(err) > 0.5 * math.pi:
        err = wrap_angle(err - math.pi)
        direction = -1.0
    else:
        direction = 1.0
    omega = config.k_theta * err
    v = direction * config.k_v * min(dist, config.d_sat) * math.cos(err)
    return HighLevelAction(v, omega).clamped(config)


def discrete_step_pipeline(pose: Pose2D, target: VirtualTarget, action: DiscreteAction,
                           axle_length: float, config: ActionConfig = ActionConfig(),
                           ) -> Tuple[WheelCommand, VirtualTarget]:
    """Full discrete-action step: move the target, re-anchor it at the
    robot, chase it with the fixed controller, convert to wheel channels.
    Returns the command together with the updated target (the caller owns
    the target between steps)."""
    new_target = apply_discrete(target, action, config.r_max)
    point = new_target.to_point(pose)
    high = goto_controller(pose, point, config)
    return continuous_to_wheels(high, axle_length, config.v_max), new_target
