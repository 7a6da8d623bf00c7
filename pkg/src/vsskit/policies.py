"""Scripted wheel-level policies: opponents, excitation and evaluation
drivers. These stand in for trained agents everywhere a policy is needed.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .action import ActionConfig, HighLevelAction, continuous_to_wheels, goto_controller
from .physics import RobotState, SimParams, Team, WheelCommand, WorldState

ISQRT2 = math.sqrt(0.5)


def get_robot(world: WorldState, team: Team, rid: int) -> RobotState:
    group = world.robots_blue if team is Team.BLUE else world.robots_yellow
    for robot in group:
        if robot.id == rid:
            return robot
    raise KeyError(f"no {team.value} robot with id {rid}")


class Policy:
    """Base: emit one wheel command for robot (team, rid) given the world."""

    name = "policy"

    def command(self, world: WorldState, params: SimParams, team: Team,
                rid: int, rng: Optional[np.random.Generator] = None) -> WheelCommand:
        raise NotImplementedError


class Still(Policy):
    name = "still"

    def command(self, world, params, team, rid, rng=None) -> WheelCommand:
        return WheelCommand(0.0, 0.0)


class RandomWalk(Policy):
    """Uniform random wheel channels each step; rng is supplied per call so
    the caller controls the stream."""

    name = "random"

    def command(self, world, params, team, rid, rng=None) -> WheelCommand:
        if rng is None:
            raise ValueError("random policy needs an rng")
        left, right = rng.uniform(-100.0, 100.0, 2)
        return WheelCommand(left, right)


class Chase(Policy):
    """Drive straight at the ball. From kickoff this doubles as a naive
    striker: robot, ball and goal start collinear."""

    name = "chase"

    def __init__(self, config: ActionConfig = ActionConfig()):
        self.config = config

    def plan(self, world, params, team, rid) -> HighLevelAction:
        robot = get_robot(world, team, rid)
        return goto_controller(robot.pose, (world.ball.x, world.ball.y), self.config)

    def command(self, world, params, team, rid, rng=None) -> WheelCommand:
        act = self.plan(world, params, team, rid)
        return continuous_to_wheels(act, params.robot.axle_length, self.config.v_max)


class GotoBallGoal(Policy):
    """Striker: settle onto the line behind the ball pointing at the goal,
    then ride that line through the ball. Wall-pinned balls get banked off
    the wall at the goal's mirror image, corner-wedged balls get struck and
    released so the carom frees them, and balls on our own goal lip are
    swept out sideways."""

    name = "goto-ball-goal"

    def __init__(self, config: ActionConfig = ActionConfig(), standoff: float = 10.0,
                 push_through: float = 20.0, lat_tol: float = 3.5,
                 lat_wide: float = 12.0, push_dist: float = 30.0,
                 lookahead: float = 12.0, clearance: float = 18.0):
        self.config = config
        self.standoff = standoff
        self.push_through = push_through
        self.lat_tol = lat_tol
        self.lat_wide = lat_wide
        self.push_dist = push_dist
        self.lookahead = lookahead
        self.clearance = clearance
        self._state = {}

    def plan(self, world, params, team, rid) -> HighLevelAction:
        robot = get_robot(world, team, rid)
        state = self._state.get((team, rid), (False, 0))
        if world.frame == 0:
            # Fresh episode; any latch or withdraw countdown is stale.
            state = (False, 0)
        target, state = self._decide(world, params, team, robot, state)
        self._state[(team, rid)] = state
        return goto_controller(robot.pose, target, self.config)

    def command(self, world, params, team, rid, rng=None) -> WheelCommand:
        act = self.plan(world, params, team, rid)
        return continuous_to_wheels(act, params.robot.axle_length, self.config.v_max)

    def target_point(self, world: WorldState, params: SimParams, team: Team,
                     robot: RobotState) -> Tuple[float, float]:
        return self._decide(world, params, team, robot, (False, 0))[0]

    def _decide(self, world: WorldState, params: SimParams, team: Team,
                robot: RobotState, state: Tuple[bool, int]
                ) -> Tuple[Tuple[float, float], Tuple[bool, int]]:
        latched, withdraw_left = state
        field = params.field
        bx, by = world.ball.x, world.ball.y
        px, py = robot.pose.x, robot.pose.y
        att = field.attack_sign(team)
        gx, gy = field.goal_centers(team)[1]
        margin = params.robot.body_radius + 0.5
        lim_x = field.play_half_length - margin
        lim_y = field.half_width - margin
        wall_x = field.play_half_length - params.ball.radius
        wall_y = field.half_width - params.ball.radius
        contact = params.robot.body_radius + params.ball.radius
        d_rb = math.hypot(bx - px, by - py)

        in_corner = abs(bx) >= wall_x - 3.0 and abs(by) >= wall_y - 8.0
        if in_corner and d_rb <= contact + 0.5:
            # Pressing a wedged ball pins it; back off so the carom off the
            # two walls can carry it out.
            withdraw_left = 15
        if withdraw_left > 0:
            retreat = (bx - math.copysign(30.0, bx), by - math.copysign(30.0, by))
            return self._clamp(retreat, params), (False, withdraw_left - 1)

        if in_corner:
            # Wedged ball: line up on the corner diagonal, then ram through
            # it at speed. No slowing carrot here; contact momentum is what
            # frees the ball, and the withdraw above breaks off the press.
            push = (math.copysign(ISQRT2, bx), math.copysign(ISQRT2, by))
            behind = (px - bx) * push[0] + (py - by) * push[1]
            lateral = push[0] * (py - by) - push[1] * (px - bx)
            lat_gate = 8.0 if latched else 3.0
            if behind <= -(contact - 1.0) and abs(lateral) <= lat_gate:
                ram = (bx + push[0] * 15.0, by + push[1] * 15.0)
                return ram, (True, withdraw_left)
            return self._clamp((bx - push[0] * (self.standoff + 2.0),
                                by - push[1] * (self.standoff + 2.0)),
                               params), (False, withdraw_left)

        if abs(bx) > lim_x and abs(by) < field.goal_half_width and bx * att > 0.0:
            # Ball on their goal lip, past the reachable band: tap it over.
            push = (float(att), 0.0)
        elif (bx * att < 0.0 and abs(by) < field.goal_half_width + 4.0
              and abs(bx) > lim_x - self.standoff + 2.0):
            # Ball near our own mouth, too deep to get goal-side of. Sweep
            # it out the near side, tilted infield to cancel the push the
            # off-center contact adds.
            tilt = math.copysign(0.25, -bx)
            s = 1.0 if by >= 0.0 else -1.0
            norm = math.hypot(tilt, s)
            push = (tilt / norm, s / norm)
        else:
            dx, dy = gx - bx, gy - by
            dist_goal = math.hypot(dx, dy)
            if dist_goal < 1e-9:
                return (bx, by), (False, withdraw_left)
            push = (dx / dist_goal, dy / dist_goal)
            push = self._bank_push(push, bx, by, gx, gy, att, params, lim_x, lim_y)

        behind = (px - bx) * push[0] + (py - by) * push[1]
        lateral = push[0] * (py - by) - push[1] * (px - bx)
        enter = (d_rb < self.push_dist and behind <= -(contact - 1.0)
                 and abs(lateral) <= self.lat_tol)
        hold = (d_rb < 1.5 * self.push_dist and behind <= -(contact - 2.5)
                and abs(lateral) <= self.lat_wide)
        carrot = (bx + push[0] * min(behind + self.lookahead, self.push_through),
                  by + push[1] * min(behind + self.lookahead, self.push_through))
        if enter or (latched and hold):
            # Ride the push line through the ball. Steering at a lookahead
            # point on the line (not the far endpoint) pulls lateral error
            # back to zero before contact, and the wide hold corridor lets
            # the robot finish turning onto the line without the target
            # snapping back to the approach leg.
            return carrot, (True, withdraw_left)
        # Swing to the standoff point behind the ball; the sideways offset
        # fades in as the robot gets goal-side so the two legs meet without
        # a seam the controller could hunt across.
        swing = self.clearance * min(1.0, max(0.0, (behind + self.standoff) / self.standoff))
        side = math.copysign(1.0, lateral) if lateral != 0.0 else 1.0
        target = self._clamp((bx - push[0] * self.standoff - push[1] * side * swing,
                              by - push[1] * self.standoff + push[0] * side * swing),
                             params)
        # Stall breaker: parked at a clamped point that stopped converging.
        # Only valid from behind the ball, else the charge rams it backward.
        if (behind <= -(contact - 1.0)
                and math.hypot(target[0] - px, target[1] - py) < 3.0):
            return carrot, (True, withdraw_left)
        return self._avoid_ball(target, px, py, bx, by, contact), (False, withdraw_left)

    def _bank_push(self, push: Tuple[float, float], bx: float, by: float,
                   gx: float, gy: float, att: int, params: SimParams,
                   lim_x: float, lim_y: float) -> Tuple[float, float]:
        """Swap the straight push for a bank off a wall when that makes the
        behind-ball point reachable. Banks aim at the goal's mirror image
        across the wall so the carom heads goal-ward."""
        field = params.field

        def violation(cand: Tuple[float, float]) -> float:
            hx = bx - cand[0] * self.standoff
            hy = by - cand[1] * self.standoff
            return max(0.0, abs(hx) - lim_x) + max(0.0, abs(hy) - lim_y)

        if violation(push) <= 0.0:
            return push
        wall_y = math.copysign(field.half_width - params.ball.radius, by)
        cands = [(gx - bx, (2.0 * wall_y - gy) - by)]
        if bx * att < 0.0 and abs(by) >= field.goal_half_width + 0.5:
            wall_x = math.copysign(field.play_half_length - params.ball.radius, bx)
            cx = (2.0 * wall_x - gx) - bx
            cy = gy - by
            # Ball drifts mouthward on the way to the end wall; skip the
            # bank if the carom point would land on the open mouth.
            y_arr = by + cy * (wall_x - bx) / cx if abs(cx) > 1e-9 else by
            if abs(y_arr) >= field.goal_half_width + 2.5:
                cands.append((cx, cy))
        for cx, cy in cands:
            norm = math.hypot(cx, cy)
            if norm < 1e-9:
                continue
            cand = (cx / norm, cy / norm)
            if violation(cand) <= 0.0:
                return cand
        return push

    def _avoid_ball(self, target: Tuple[float, float], px: float, py: float,
                    bx: float, by: float, contact: float) -> Tuple[float, float]:
        """Detour around the ball when the straight run to an approach
        target would plow through it; stray contact on this leg shoves the
        ball somewhere unplanned."""
        ux, uy = target[0] - px, target[1] - py
        seg = math.hypot(ux, uy)
        if seg < 1e-9:
            return target
        ux, uy = ux / seg, uy / seg
        proj = (bx - px) * ux + (by - py) * uy
        if proj <= 0.0 or proj >= seg:
            return target
        cx, cy = px + ux * proj, py + uy * proj
        rx, ry = cx - bx, cy - by
        miss = math.hypot(rx, ry)
        r = contact + 1.5
        if miss >= r:
            return target
        if miss < 1e-9:
            rx, ry = -uy, ux
            miss = 1.0
        # Slide the closest-approach point out to the clearance circle; the
        # waypoint meets the straight path exactly at the trigger radius,
        # so the detour fades in without snapping.
        return (bx + rx / miss * r, by + ry / miss * r)

    def _clamp(self, point: Tuple[float, float], params: SimParams) -> Tuple[float, float]:
        margin = params.robot.body_radius + 0.5
        bx = params.field.play_half_length - margin
        by = params.field.half_width - margin
        return (min(bx, max(-bx, point[0])), min(by, max(-by, point[1])))


POLICIES = {cls.name: cls for cls in (Still, RandomWalk, Chase, GotoBallGoal)}


def make_policy(name: str, config: ActionConfig = ActionConfig()) -> Policy:
    try:
        cls = POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown agent {name!r}; choose from {sorted(POLICIES)}")
    if cls in (Chase, GotoBallGoal):
        return cls(config)
    return cls()
