"""Deterministic fixed-timestep 2D world for differential-drive robot soccer.

Units are centimeters, seconds and radians throughout. Stepping is pure
floating-point arithmetic with no hidden randomness: identical inputs yield
bit-identical successor worlds on any IEEE-754 platform. Robots are rigid
collision discs driven through a first-order actuator lag; the ball is a
disc with constant rolling-friction deceleration. Walls are axis-aligned
segments; each end wall opens into a goal pocket behind the goal mouth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

TWO_PI = 2.0 * math.pi

_MAX_RESOLVE_ITERS = 10
_OVERLAP_SLOP = 1e-9


def wrap_angle(theta: float) -> float:
    """Map an angle onto (-pi, pi]."""
    theta = math.remainder(theta, TWO_PI)
    if theta <= -math.pi:
        theta += TWO_PI
    return theta


class Team(str, Enum):
    BLUE = "blue"
    YELLOW = "yellow"

    @property
    def opponent(self) -> "Team":
        return Team.YELLOW if self is Team.BLUE else Team.BLUE


@dataclass(frozen=True)
class FieldSpec:
    """Arena geometry: playing rectangle plus recessed goal pockets.

    The playing rectangle spans ``[-play_half_length, play_half_length]`` in x
    and ``[-half_width, half_width]`` in y. Behind each goal mouth (the band
    ``|y| < goal_half_width`` on the end walls) a pocket of ``pocket_depth``
    extends the arena, so the full x extent and the goal-center separation
    both equal ``normalization_length``.
    """

    play_half_length: float = 75.0
    pocket_depth: float = 10.0
    half_width: float = 65.0
    goal_half_width: float = 20.0
    normalization_length: float = 170.0

    def __post_init__(self):
        if self.goal_half_width >= self.half_width:
            raise ValueError("goal mouth must be narrower than the field")
        extent = 2.0 * (self.play_half_length + self.pocket_depth)
        if abs(extent - self.normalization_length) > 1e-9:
            raise ValueError(
                "total x extent 2*(play_half_length + pocket_depth) must equal "
                f"normalization_length, got {extent} vs {self.normalization_length}"
            )

    @property
    def back_wall_x(self) -> float:
        return self.play_half_length + self.pocket_depth

    @property
    def goal_center_own(self) -> Tuple[float, float]:
        """Center of the goal defended by the blue team."""
        return (-self.back_wall_x, 0.0)

    @property
    def goal_center_adv(self) -> Tuple[float, float]:
        """Center of the goal the blue team attacks."""
        return (self.back_wall_x, 0.0)

    def goal_centers(self, team: Team) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """(own goal, adversary goal) centers from ``team``'s perspective."""
        if team is Team.BLUE:
            return self.goal_center_own, self.goal_center_adv
        return self.goal_center_adv, self.goal_center_own

    def attack_sign(self, team: Team) -> float:
        """Sign of the x direction ``team`` shoots toward."""
        return 1.0 if team is Team.BLUE else -1.0


@dataclass(frozen=True)
class RobotSpec:
    """Differential-drive robot constants.

    ``body_radius`` is the half-diagonal of the square chassis, used as the
    collision disc radius. ``v_max`` is the wheel surface speed produced by
    command value 100; ``motor_tau`` is the first-order actuator lag.
    """

    body_radius: float = 5.3
    axle_length: float = 7.5
    wheel_radius: float = 2.6
    mass: float = 150.0
    v_max: float = 150.0
    motor_tau: float = 0.05

    def __post_init__(self):
        for name in ("body_radius", "axle_length", "wheel_radius", "mass", "v_max", "motor_tau"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"RobotSpec.{name} must be positive")
        if self.body_radius < self.axle_length / 2.0:
            raise ValueError("collision disc must cover the wheel track")


@dataclass(frozen=True)
class BallParams:
    """Ball constants. Mass and friction are tunable placeholders, not
    measured values; wall/robot restitutions are configurable defaults."""

    radius: float = 2.135
    mass: float = 46.0
    friction_decel: float = 25.0
    wall_restitution: float = 0.75
    robot_restitution: float = 0.5

    def __post_init__(self):
        if self.radius <= 0.0 or self.mass <= 0.0:
            raise ValueError("ball radius and mass must be positive")
        if self.friction_decel < 0.0:
            raise ValueError("friction deceleration cannot be negative")


@dataclass(frozen=True)
class SimParams:
    """Bundle of physics constants plus the fixed control timestep."""

    field: FieldSpec = FieldSpec()
    robot: RobotSpec = RobotSpec()
    ball: BallParams = BallParams()
    control_dt: float = 1.0 / 30.0
    n_substeps: int = 10

    def __post_init__(self):
        if self.control_dt <= 0.0:
            raise ValueError("control_dt must be positive")
        if self.n_substeps < 1:
            raise ValueError("need at least one physics substep")


@dataclass
class Pose2D:
    x: float
    y: float
    theta: float

    def __post_init__(self):
        self.theta = wrap_angle(self.theta)


@dataclass
class Twist2D:
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0


@dataclass(frozen=True)
class WheelCommand:
    """Per-wheel channel values, clamped into [-100, 100] on construction."""

    left: float
    right: float

    def __post_init__(self):
        object.__setattr__(self, "left", min(100.0, max(-100.0, float(self.left))))
        object.__setattr__(self, "right", min(100.0, max(-100.0, float(self.right))))


ZERO_COMMAND = WheelCommand(0.0, 0.0)


@dataclass
class RobotState:
    id: int
    team: Team
    pose: Pose2D
    twist: Twist2D = field(default_factory=Twist2D)
    wheel_left: float = 0.0
    wheel_right: float = 0.0

    def forward_speed(self) -> float:
        """Instantaneous wheel-kinematic forward speed (cm/s)."""
        return 0.5 * (self.wheel_left + self.wheel_right)

    def spin_rate(self, axle_length: float) -> float:
        return (self.wheel_right - self.wheel_left) / axle_length

    def velocity(self) -> Tuple[float, float]:
        """Wheel-kinematic world-frame velocity, used for contact impulses."""
        v = self.forward_speed()
        return (v * math.cos(self.pose.theta), v * math.sin(self.pose.theta))


@dataclass
class BallState:
    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0
    radius: float = 2.135


@dataclass
class WorldState:
    """Full simulation truth. Treated as an immutable value: stepping
    functions build new instances rather than mutating their input."""

    robots_blue: List[RobotState]
    robots_yellow: List[RobotState]
    ball: BallState
    elapsed: float = 0.0
    score_own: int = 0
    score_adv: int = 0
    frame: int = 0

    def robots(self) -> List[RobotState]:
        return list(self.robots_blue) + list(self.robots_yellow)

    def copy(self) -> "WorldState":
        return WorldState(
            robots_blue=[_copy_robot(r) for r in self.robots_blue],
            robots_yellow=[_copy_robot(r) for r in self.robots_yellow],
            ball=replace(self.ball),
            elapsed=self.elapsed,
            score_own=self.score_own,
            score_adv=self.score_adv,
            frame=self.frame,
        )


def _copy_robot(r: RobotState) -> RobotState:
    return RobotState(
        id=r.id,
        team=r.team,
        pose=Pose2D(r.pose.x, r.pose.y, r.pose.theta),
        twist=Twist2D(r.twist.vx, r.twist.vy, r.twist.omega),
        wheel_left=r.wheel_left,
        wheel_right=r.wheel_right,
    )


def diff_drive_update(pose: Pose2D, v_l: float, v_r: float, axle_length: float, dt: float) -> Pose2D:
    """Advance a pose by the closed-form unicycle arc for constant wheel speeds.

    ``v = (v_r + v_l)/2`` and ``omega = (v_r - v_l)/axle_length``; below
    ``|omega| < 1e-9`` rad/s the motion is treated as a straight line.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if axle_length <= 0.0:
        raise ValueError("axle_length must be positive")
    v = 0.5 * (v_r + v_l)
    omega = (v_r - v_l) / axle_length
    theta = pose.theta
    if abs(omega) < 1e-9:
        return Pose2D(pose.x + v * math.cos(theta) * dt,
                      pose.y + v * math.sin(theta) * dt,
                      theta)
    # Product form of the chord R*(sin(theta') - sin(theta)): no cancellation
    # for small omega*dt, so accuracy is uniform down to the cutoff.
    half = 0.5 * omega * dt
    chord = v * dt * (math.sin(half) / half)
    x = pose.x + chord * math.cos(theta + half)
    y = pose.y + chord * math.sin(theta + half)
    return Pose2D(x, y, theta + omega * dt)


def motor_step(actual: float, command: float, spec: RobotSpec, dt: float) -> float:
    """First-order lag of a wheel's surface speed toward its commanded target.

    The target is ``v_max * command / 100``; the output is always bounded by
    ``v_max`` in magnitude.
    """
    if abs(command) > 100.0 + 1e-12:
        raise ValueError("wheel command outside [-100, 100]")
    target = spec.v_max * command / 100.0
    alpha = 1.0 - math.exp(-dt / spec.motor_tau)
    out = actual + (target - actual) * alpha
    return min(spec.v_max, max(-spec.v_max, out))


def step_world(
    world: WorldState,
    commands: Sequence[WheelCommand],
    params: SimParams,
    dt: Optional[float] = None,
) -> WorldState:
    """Advance the world by one control period.

    ``commands`` carries one entry per robot, blue ascending id then yellow.
    Each of the ``n_substeps`` substeps applies the actuator lag, the exact
    arc update per robot, ball integration with rolling friction, and
    collision resolution. Reported robot twists are finite differences of
    pose over the control period (what an overhead tracker would measure),
    so a wall-pinned robot reports zero speed into the wall.
    """
    n_robots = len(world.robots_blue) + len(world.robots_yellow)
    if len(commands) != n_robots:
        raise ValueError(f"expected {n_robots} commands, got {len(commands)}")
    if dt is None:
        dt = params.control_dt
    h = dt / params.n_substeps

    robots = [_copy_robot(r) for r in world.robots()]
    ball = replace(world.ball)
    old_poses = [(r.pose.x, r.pose.y, r.pose.theta) for r in robots]

    for _ in range(params.n_substeps):
        for robot, cmd in zip(robots, commands):
            robot.wheel_left = motor_step(robot.wheel_left, cmd.left, params.robot, h)
            robot.wheel_right = motor_step(robot.wheel_right, cmd.right, params.robot, h)
            robot.pose = diff_drive_update(
                robot.pose, robot.wheel_left, robot.wheel_right, params.robot.axle_length, h
            )
        _integrate_ball(ball, params.ball, h)
        _resolve(robots, ball, params)

    for robot, (ox, oy, ot) in zip(robots, old_poses):
        robot.twist = Twist2D(
            vx=(robot.pose.x - ox) / dt,
            vy=(robot.pose.y - oy) / dt,
            omega=wrap_angle(robot.pose.theta - ot) / dt,
        )

    n_blue = len(world.robots_blue)
    frame = world.frame + 1
    return WorldState(
        robots_blue=robots[:n_blue],
        robots_yellow=robots[n_blue:],
        ball=ball,
        elapsed=frame * dt,
        score_own=world.score_own,
        score_adv=world.score_adv,
        frame=frame,
    )


def resolve_collisions(world: WorldState, params: SimParams) -> WorldState:
    """Separate any overlapping bodies and apply contact impulses.

    Exposed for direct testing; ``step_world`` calls the same routine every
    substep. Ball impulses use the two-body reduced-mass formula with the
    robot and ball masses; the robot side of the recoil is projected onto its
    drivetrain (equal change to both wheels), never adding kinetic energy.
    """
    out = world.copy()
    robots = out.robots()
    _resolve(robots, out.ball, params)
    n_blue = len(out.robots_blue)
    out.robots_blue = robots[:n_blue]
    out.robots_yellow = robots[n_blue:]
    return out


def _integrate_ball(ball: BallState, params: BallParams, h: float) -> None:
    speed = math.hypot(ball.vx, ball.vy)
    if speed > 0.0:
        new_speed = max(0.0, speed - params.friction_decel * h)
        scale = new_speed / speed
        ball.vx *= scale
        ball.vy *= scale
    ball.x += ball.vx * h
    ball.y += ball.vy * h


def _resolve(robots: List[RobotState], ball: BallState, params: SimParams) -> None:
    for _ in range(_MAX_RESOLVE_ITERS):
        moved = False
        moved |= _separate_robot_pairs(robots, params)
        moved |= _collide_robots_ball(robots, ball, params)
        moved |= _ball_walls(ball, params)
        moved |= _robots_walls(robots, params)
        if not moved:
            break


def _separate_robot_pairs(robots: List[RobotState], params: SimParams) -> bool:
    # Robots are wheel-driven; pairs separate positionally with no impulse.
    r = params.robot.body_radius
    moved = False
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            a, b = robots[i], robots[j]
            dx = b.pose.x - a.pose.x
            dy = b.pose.y - a.pose.y
            dist = math.hypot(dx, dy)
            overlap = 2.0 * r - dist
            if overlap <= _OVERLAP_SLOP:
                continue
            if dist < 1e-12:
                nx, ny = 1.0, 0.0
            else:
                nx, ny = dx / dist, dy / dist
            half = 0.5 * overlap
            a.pose = Pose2D(a.pose.x - nx * half, a.pose.y - ny * half, a.pose.theta)
            b.pose = Pose2D(b.pose.x + nx * half, b.pose.y + ny * half, b.pose.theta)
            moved = True
    return moved


def _collide_robots_ball(robots: List[RobotState], ball: BallState, params: SimParams) -> bool:
    m_r = params.robot.mass
    m_b = params.ball.mass
    e = params.ball.robot_restitution
    contact = params.robot.body_radius + ball.radius
    moved = False
    for robot in robots:
        dx = ball.x - robot.pose.x
        dy = ball.y - robot.pose.y
        dist = math.hypot(dx, dy)
        overlap = contact - dist
        if overlap <= _OVERLAP_SLOP:
            continue
        if dist < 1e-12:
            nx, ny = 1.0, 0.0
        else:
            nx, ny = dx / dist, dy / dist
        rvx, rvy = robot.velocity()
        rel_n = (ball.vx - rvx) * nx + (ball.vy - rvy) * ny
        if rel_n < 0.0:
            # Reduced-mass impulse; the ball takes its full share.
            j = -(1.0 + e) * rel_n / (1.0 / m_r + 1.0 / m_b)
            ball.vx += (j / m_b) * nx
            ball.vy += (j / m_b) * ny
            # Robot recoil lives in its drivetrain: only the component along
            # the heading can change wheel speeds (equal on both wheels).
            heading_n = nx * math.cos(robot.pose.theta) + ny * math.sin(robot.pose.theta)
            dv = -(j / m_r) * heading_n
            v_cap = params.robot.v_max
            robot.wheel_left = min(v_cap, max(-v_cap, robot.wheel_left + dv))
            robot.wheel_right = min(v_cap, max(-v_cap, robot.wheel_right + dv))
        # Positional correction split by inverse mass.
        push_ball = overlap * m_r / (m_r + m_b)
        push_robot = overlap * m_b / (m_r + m_b)
        ball.x += nx * push_ball
        ball.y += ny * push_ball
        robot.pose = Pose2D(robot.pose.x - nx * push_robot,
                            robot.pose.y - ny * push_robot,
                            robot.pose.theta)
        moved = True
    return moved


def _ball_walls(ball: BallState, params: SimParams) -> bool:
    """Ball vs arena walls. The goal mouth is open for ball centers with
    |y| < goal_half_width (center-based test, matching goal detection)."""
    f = params.field
    e = params.ball.wall_restitution
    rb = ball.radius
    moved = False

    if abs(ball.x) <= f.play_half_length:
        bound_y = f.half_width - rb
        if ball.y > bound_y:
            ball.y = bound_y
            if ball.vy > 0.0:
                ball.vy = -e * ball.vy
            moved = True
        elif ball.y < -bound_y:
            ball.y = -bound_y
            if ball.vy < 0.0:
                ball.vy = -e * ball.vy
            moved = True
        if abs(ball.y) >= f.goal_half_width:
            bound_x = f.play_half_length - rb
            if ball.x > bound_x:
                ball.x = bound_x
                if ball.vx > 0.0:
                    ball.vx = -e * ball.vx
                moved = True
            elif ball.x < -bound_x:
                ball.x = -bound_x
                if ball.vx < 0.0:
                    ball.vx = -e * ball.vx
                moved = True
    else:
        # Inside a goal pocket.
        bound_y = f.goal_half_width - rb
        if ball.y > bound_y:
            ball.y = bound_y
            if ball.vy > 0.0:
                ball.vy = -e * ball.vy
            moved = True
        elif ball.y < -bound_y:
            ball.y = -bound_y
            if ball.vy < 0.0:
                ball.vy = -e * ball.vy
            moved = True
        bound_x = f.back_wall_x - rb
        if ball.x > bound_x:
            ball.x = bound_x
            if ball.vx > 0.0:
                ball.vx = -e * ball.vx
            moved = True
        elif ball.x < -bound_x:
            ball.x = -bound_x
            if ball.vx < 0.0:
                ball.vx = -e * ball.vx
            moved = True
    return moved


def _robots_walls(robots: List[RobotState], params: SimParams) -> bool:
    # Robots stay in the playing rectangle; pockets are ball-only territory.
    f = params.field
    r = params.robot.body_radius
    bx = f.play_half_length - r
    by = f.half_width - r
    moved = False
    for robot in robots:
        x = min(bx, max(-bx, robot.pose.x))
        y = min(by, max(-by, robot.pose.y))
        if x != robot.pose.x or y != robot.pose.y:
            robot.pose = Pose2D(x, y, robot.pose.theta)
            moved = True
    return moved


def kinetic_energy(world: WorldState, params: SimParams) -> float:
    """Total kinetic energy (g cm^2/s^2) from the dynamic state: robot wheel
    kinematics plus ball velocity. Used by energy-sanity checks."""
    total = 0.0
    spec = params.robot
    inertia = 0.5 * spec.mass * spec.body_radius ** 2
    for r in world.robots():
        v = r.forward_speed()
        w = r.spin_rate(spec.axle_length)
        total += 0.5 * spec.mass * v * v + 0.5 * inertia * w * w
    b = world.ball
    total += 0.5 * params.ball.mass * (b.vx * b.vx + b.vy * b.vy)
    return total
