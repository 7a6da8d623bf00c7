"""Gym-style episodic soccer environment over the physics world.

The caller controls the blue team; yellow follows a pluggable scripted
policy. Observations are flat normalized vectors with a [0,1] timestamp.
Timekeeping is frame-based: timestamp = frame / max_frames, so it reaches
exactly 1.0 at the timeout regardless of how 1/30 s rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .action import (
    ActionConfig,
    DiscreteAction,
    HighLevelAction,
    VirtualTarget,
    continuous_to_wheels,
    discrete_step_pipeline,
    wheel_speeds_to_twist,
)
from .physics import (
    BallState,
    Pose2D,
    RobotState,
    SimParams,
    Team,
    WheelCommand,
    WorldState,
    step_world,
)
from .policies import Policy, Still
from .reward import RewardBreakdown, RewardWeights, ball_potential, combine, reward_energy, reward_move


class ResetMode(str, Enum):
    KICKOFF = "kickoff"
    UNIFORM_RANDOM = "uniform_random"


class ActionMode(str, Enum):
    WHEEL = "wheel"
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class EpisodeDone(RuntimeError):
    """Raised when step() is called on a finished episode."""


@dataclass(frozen=True)
class EpisodeConfig:
    max_duration: float = 300.0
    control_dt: float = 1.0 / 30.0
    n_per_team: int = 1
    end_on_goal: bool = True
    reset_mode: ResetMode = ResetMode.KICKOFF
    seed: int = 0
    # None mirrors n_per_team; 0 gives a single-team world (characterization
    # rigs, controller benchmarks).
    n_opponents: Optional[int] = None

    def __post_init__(self):
        if self.max_duration <= 0.0:
            raise ValueError("max_duration must be positive")
        if self.control_dt <= 0.0:
            raise ValueError("control_dt must be positive")
        if self.n_per_team not in (1, 2, 3):
            raise ValueError("n_per_team must be 1, 2 or 3")
        if self.n_opponents is not None and self.n_opponents not in (0, 1, 2, 3):
            raise ValueError("n_opponents must be in 0..3")
        object.__setattr__(self, "reset_mode", ResetMode(self.reset_mode))

    @property
    def opponents(self) -> int:
        return self.n_per_team if self.n_opponents is None else self.n_opponents

    @property
    def max_frames(self) -> int:
        return max(1, round(self.max_duration / self.control_dt))


@dataclass
class StepResult:
    observation: np.ndarray
    rewards: List[RewardBreakdown]
    done: bool
    info: Dict[str, Any]


# Kickoff slots per team, mirrored for yellow; ball at the center spot.
_KICKOFF_SLOTS = [(-20.0, 0.0), (-45.0, 20.0), (-45.0, -20.0)]


def kickoff_world(config: EpisodeConfig, params: SimParams) -> WorldState:
    blue = [RobotState(id=i, team=Team.BLUE, pose=Pose2D(x, y, 0.0))
            for i, (x, y) in enumerate(_KICKOFF_SLOTS[:config.n_per_team])]
    yellow = [RobotState(id=i, team=Team.YELLOW, pose=Pose2D(-x, -y, math.pi))
              for i, (x, y) in enumerate(_KICKOFF_SLOTS[:config.opponents])]
    ball = BallState(0.0, 0.0, radius=params.ball.radius)
    return WorldState(robots_blue=blue, robots_yellow=yellow, ball=ball)


def uniform_world(config: EpisodeConfig, params: SimParams,
                  rng: np.random.Generator) -> WorldState:
    """Rejection-sample non-overlapping poses, ball first then blue then
    yellow in ascending id order (the draw order is part of the seeded
    contract)."""
    f = params.field
    r_ball = params.ball.radius
    r_robot = params.robot.body_radius
    clearance = 0.5

    bx = rng.uniform(-(f.play_half_length - r_ball), f.play_half_length - r_ball)
    by = rng.uniform(-(f.half_width - r_ball), f.half_width - r_ball)
    ball = BallState(bx, by, radius=r_ball)
    placed: List[Tuple[float, float, float]] = [(bx, by, r_ball)]

    def place_robot(team: Team, rid: int) -> RobotState:
        lim_x = f.play_half_length - r_robot
        lim_y = f.half_width - r_robot
        for _ in range(1000):
            x = rng.uniform(-lim_x, lim_x)
            y = rng.uniform(-lim_y, lim_y)
            theta = rng.uniform(-math.pi, math.pi)
            ok = all(math.hypot(x - ox, y - oy) > r_robot + orad + clearance
                     for ox, oy, orad in placed)
            if ok:
                placed.append((x, y, r_robot))
                return RobotState(id=rid, team=team, pose=Pose2D(x, y, theta))
        raise RuntimeError("could not place robots without overlap after 1000 attempts")

    blue = [place_robot(Team.BLUE, i) for i in range(config.n_per_team)]
    yellow = [place_robot(Team.YELLOW, i) for i in range(config.opponents)]
    return WorldState(robots_blue=blue, robots_yellow=yellow, ball=ball)


def check_goal(world: WorldState, params: SimParams) -> Optional[Team]:
    """Scoring team when the ball center is past a goal line inside the
    mouth; blue attacks +x."""
    f = params.field
    if abs(world.ball.y) >= f.goal_half_width:
        return None
    if world.ball.x > f.play_half_length:
        return Team.BLUE
    if world.ball.x < -f.play_half_length:
        return Team.YELLOW
    return None


def build_observation(world: WorldState, config: EpisodeConfig, params: SimParams,
                      omega_max: float = 40.0, normalize: bool = True) -> np.ndarray:
    """[ball x,y,vx,vy] ++ per robot [x,y,sin,cos,vx,vy,w] ++ [timestamp],
    blue then yellow in ascending id. Positions scale by the arena
    half-extents, speeds by v_max, w by omega_max."""
    f = params.field
    sx = f.back_wall_x if normalize else 1.0
    sy = f.half_width if normalize else 1.0
    sv = params.robot.v_max if normalize else 1.0
    sw = omega_max if normalize else 1.0
    out = [world.ball.x / sx, world.ball.y / sy, world.ball.vx / sv, world.ball.vy / sv]
    for robot in world.robots():
        out.extend([
            robot.pose.x / sx,
            robot.pose.y / sy,
            math.sin(robot.pose.theta),
            math.cos(robot.pose.theta),
            robot.twist.vx / sv,
            robot.twist.vy / sv,
            robot.twist.omega / sw,
        ])
    out.append(min(1.0, world.frame / config.max_frames))
    return np.asarray(out, dtype=np.float64)


def observation_length(n_robots: int) -> int:
    return 4 + 7 * n_robots + 1


def world_values_from_observation(obs: np.ndarray, n_robots: int,
                                  config: EpisodeConfig, params: SimParams,
                                  omega_max: float = 40.0) -> Dict[str, Any]:
    """Invert the normalization: raw ball state, per-robot raw pose/twist
    (theta via atan2) and the timestamp fraction."""
    if len(obs) != observation_length(n_robots):
        raise ValueError("observation length does not match robot count")
    f = params.field
    sv = params.robot.v_max
    ball = (obs[0] * f.back_wall_x, obs[1] * f.half_width, obs[2] * sv, obs[3] * sv)
    robots = []
    for i in range(n_robots):
        x, y, s, c, vx, vy, w = obs[4 + 7 * i: 11 + 7 * i]
        robots.append((x * f.back_wall_x, y * f.half_width, math.atan2(s, c),
                       vx * sv, vy * sv, w * omega_max))
    return {"ball": ball, "robots": robots, "timestamp": float(obs[-1])}


class SoccerEnv:
    """Episodic environment; the caller steps the blue team.

    command_filter, when set, transforms the blue wheel commands just
    before physics (plant perturbation hook); rewards are computed on the
    unfiltered commands the agent actually issued.
    """

    def __init__(self, config: EpisodeConfig = EpisodeConfig(),
                 params: SimParams = SimParams(),
                 action_mode: ActionMode = ActionMode.WHEEL,
                 weights: Optional[RewardWeights] = None,
                 opponent: Optional[Policy] = None,
                 action_config: ActionConfig = ActionConfig(),
                 command_filter=None):
        if abs(config.control_dt - params.control_dt) > 1e-12:
            raise ValueError("episode and physics control_dt disagree")
        self.config = config
        self.params = params
        self.action_mode = ActionMode(action_mode)
        if weights is None:
            weights = (RewardWeights.for_discrete()
                       if self.action_mode is ActionMode.DISCRETE else RewardWeights())
        self.weights = weights
        self.opponent = opponent if opponent is not None else Still()
        self.action_config = action_config
        self.command_filter = command_filter
        self.world: Optional[WorldState] = None
        self._rng = np.random.default_rng(config.seed)
        self._done = True
        self._targets: List[VirtualTarget] = []
        self._prev_agents: List[Tuple[float, float]] = []
        self._prev_ball: Tuple[float, float] = (0.0, 0.0)
        self._bp_prev = 0.0

    @property
    def n_controlled(self) -> int:
        return self.config.n_per_team

    @property
    def done(self) -> bool:
        return self._done

    def reset(self, seed: Optional[int | np.random.SeedSequence] = None) -> np.ndarray:
        self._rng = np.random.default_rng(self.config.seed if seed is None else seed)
        if self.config.reset_mode is ResetMode.KICKOFF:
            self.world = kickoff_world(self.config, self.params)
        else:
            self.world = uniform_world(self.config, self.params, self._rng)
        self._done = False
        self._targets = [VirtualTarget(0.0, 0.0) for _ in range(self.n_controlled)]
        self._anchor_baselines()
        return build_observation(self.world, self.config, self.params,
                                 self.action_config.omega_max)

    def step(self, actions: Sequence[Any]) -> StepResult:
        if self._done or self.world is None:
            raise EpisodeDone("episode is finished; call reset()")
        if len(actions) != self.n_controlled:
            raise ValueError(f"expected {self.n_controlled} actions, got {len(actions)}")
        cfg, params = self.config, self.params

        blue_cmds = [self._to_command(a, i) for i, a in enumerate(actions)]
        sent = list(blue_cmds)
        if self.command_filter is not None:
            sent = list(self.command_filter(sent))
            if len(sent) != len(blue_cmds):
                raise ValueError("command filter changed the command count")
        yellow_cmds = [self.opponent.command(self.world, params, Team.YELLOW,
                                             robot.id, self._rng)
                       for robot in self.world.robots_yellow]

        world2 = step_world(self.world, sent + yellow_cmds, params, cfg.control_dt)
        goal = check_goal(world2, params)
        if goal is Team.BLUE:
            world2.score_own += 1
        elif goal is Team.YELLOW:
            world2.score_adv += 1

        bp_now = ball_potential((world2.ball.x, world2.ball.y), params.field, Team.BLUE)
        dt = cfg.control_dt
        r_goal = 0.0 if goal is None else (1.0 if goal is Team.BLUE else -1.0)
        rewards = []
        for i, robot in enumerate(world2.robots_blue):
            r_move = reward_move((robot.pose.x, robot.pose.y),
                                 (world2.ball.x, world2.ball.y),
                                 self._prev_agents[i], self._prev_ball, dt)
            r_pot = (bp_now - self._bp_prev) / dt
            rewards.append(combine(r_goal, r_move, r_pot,
                                   reward_energy(blue_cmds[i]), self.weights))

        info: Dict[str, Any] = {
            "goal": goal,
            "score": (world2.score_own, world2.score_adv),
            "world": world2,
            "commands": blue_cmds,
            "desired": [wheel_speeds_to_twist(c.left * params.robot.v_max / 100.0,
                                              c.right * params.robot.v_max / 100.0,
                                              params.robot.axle_length)
                        for c in blue_cmds],
            "observed": [wheel_speeds_to_twist(r.wheel_left, r.wheel_right,
                                               params.robot.axle_length)
                         for r in world2.robots_blue],
        }

        if goal is not None and not cfg.end_on_goal:
            # Re-spot at kickoff; clock and score carry over. Baselines
            # re-anchor so the next step sees no teleport in its rewards.
            fresh = kickoff_world(cfg, params)
            fresh.frame = world2.frame
            fresh.elapsed = world2.elapsed
            fresh.score_own = world2.score_own
            fresh.score_adv = world2.score_adv
            self.world = fresh
            self._targets = [VirtualTarget(0.0, 0.0) for _ in range(self.n_controlled)]
            self._anchor_baselines()
        else:
            self.world = world2
            self._prev_ball = (world2.ball.x, world2.ball.y)
            self._prev_agents = [(r.pose.x, r.pose.y) for r in world2.robots_blue]
            self._bp_prev = bp_now

        self._done = (goal is not None and cfg.end_on_goal) or \
            self.world.frame >= cfg.max_frames
        obs = build_observation(self.world, cfg, params, self.action_config.omega_max)
        return StepResult(observation=obs, rewards=rewards, done=self._done, info=info)

    def _anchor_baselines(self):
        world = self.world
        self._prev_ball = (world.ball.x, world.ball.y)
        self._prev_agents = [(r.pose.x, r.pose.y) for r in world.robots_blue]
        self._bp_prev = ball_potential(self._prev_ball, self.params.field, Team.BLUE)

    def _to_command(self, action: Any, idx: int) -> WheelCommand:
        mode = self.action_mode
        try:
            if mode is ActionMode.WHEEL:
                if isinstance(action, WheelCommand):
                    return action
                left, right = action
                return WheelCommand(float(left), float(right))
            if mode is ActionMode.CONTINUOUS:
                if not isinstance(action, HighLevelAction):
                    v, omega = action
                    action = HighLevelAction(float(v), float(omega))
                action = action.clamped(self.action_config)
                return continuous_to_wheels(action, self.params.robot.axle_length,
                                            self.action_config.v_max)
            robot = self.world.robots_blue[idx]
            cmd, self._targets[idx] = discrete_step_pipeline(
                robot.pose, self._targets[idx], DiscreteAction(int(action)),
                self.params.robot.axle_length, self.action_config)
            return cmd
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed action for agent {idx}: {action!r}") from exc
