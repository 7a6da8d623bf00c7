"""vsskit: deterministic 2D robot-soccer simulation kit.

Provides a fixed-timestep differential-drive physics world, a gym-style
episode environment with shaped rewards and discrete/continuous action
abstractions, an inverse-dynamics adaptor trainable against perturbed
plants, and a binary UDP state/command protocol with a lossy-channel model.
"""

from .physics import (
    BallParams,
    BallState,
    FieldSpec,
    Pose2D,
    RobotSpec,
    RobotState,
    SimParams,
    Team,
    Twist2D,
    WheelCommand,
    WorldState,
    diff_drive_update,
    motor_step,
    step_world,
    wrap_angle,
)

__version__ = "0.1.0"

__all__ = [
    "BallParams",
    "BallState",
    "FieldSpec",
    "Pose2D",
    "RobotSpec",
    "RobotState",
    "SimParams",
    "Team",
    "Twist2D",
    "WheelCommand",
    "WorldState",
    "diff_drive_update",
    "motor_step",
    "step_world",
    "wrap_angle",
    "__version__",
]
