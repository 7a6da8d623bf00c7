"""Oracle-backed tests for the physics world.

Expected values come from routes independent of the implementation: a
fine-step midpoint integrator for the unicycle ODE, closed-form solutions
of the actuator-lag and uniform-deceleration ODEs, and the one-dimensional
two-body restitution formula for ball impulses.
"""

import math

import numpy as np
import pytest

from vsskit.physics import (
    BallParams,
    BallState,
    FieldSpec,
    Pose2D,
    RobotSpec,
    RobotState,
    SimParams,
    Team,
    WheelCommand,
    WorldState,
    diff_drive_update,
    kinetic_energy,
    motor_step,
    resolve_collisions,
    step_world,
    wrap_angle,
)

PARAMS = SimParams()


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

def fine_step_poses(x0, y0, th0, v_l, v_r, axle, duration, n_steps, chunk=2500):
    """Integrate the unicycle ODE x' = v cos(th), y' = v sin(th), th' = w
    with the explicit midpoint rule, vectorized over samples.

    Second order: global error ~ duration * v * w^2 * h^2 / 24, which for
    the speed envelope here (|v| <= 150, |w| <= 40) stays below 2e-7 cm at
    h = 1e-5 s. Forward Euler cannot reach that at this step count.
    """
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    th = np.asarray(th0, dtype=float)
    v = 0.5 * (np.asarray(v_r, dtype=float) + np.asarray(v_l, dtype=float))
    w = (np.asarray(v_r, dtype=float) - np.asarray(v_l, dtype=float)) / axle
    h = duration / n_steps
    done = 0
    while done < n_steps:
        m = min(chunk, n_steps - done)
        k = np.arange(done, done + m, dtype=float)
        mid = th[:, None] + w[:, None] * ((k + 0.5) * h)
        x += (v * h) * np.cos(mid).sum(axis=1)
        y += (v * h) * np.sin(mid).sum(axis=1)
        done += m
    return x, y, th + w * duration


def lag_fine_step(v0, target, tau, duration, n_steps=50000):
    """Midpoint integration of the lag ODE v' = (target - v) / tau."""
    v = float(v0)
    h = duration / n_steps
    for _ in range(n_steps):
        v_half = v + 0.5 * h * (target - v) / tau
        v = v + h * (target - v_half) / tau
    return v


def ball_speed_after_head_on(v_in, m_robot, m_ball, e):
    """1D two-body collision with restitution, robot initially at rest:
    momentum conservation plus v_sep = -e * v_approach."""
    return (m_ball - e * m_robot) * v_in / (m_robot + m_ball)


def pair_overlap(world, params):
    """Largest pairwise penetration depth among all discs (cm)."""
    worst = 0.0
    robots = world.robots()
    r = params.robot.body_radius
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            d = math.hypot(robots[j].pose.x - robots[i].pose.x,
                           robots[j].pose.y - robots[i].pose.y)
            worst = max(worst, 2.0 * r - d)
    for rob in robots:
        d = math.hypot(world.ball.x - rob.pose.x, world.ball.y - rob.pose.y)
        worst = max(worst, r + world.ball.radius - d)
    return worst


def make_robot(rid, team, x, y, th, wl=0.0, wr=0.0):
    return RobotState(id=rid, team=team, pose=Pose2D(x, y, th),
                      wheel_left=wl, wheel_right=wr)


def make_world(blue=(), yellow=(), ball=None):
    return WorldState(
        robots_blue=list(blue),
        robots_yellow=list(yellow),
        ball=ball if ball is not None else BallState(0.0, 0.0),
    )


# ---------------------------------------------------------------------------
# Arc update
# ---------------------------------------------------------------------------

class TestArcUpdate:
    def test_straight_line(self):
        p = diff_drive_update(Pose2D(0, 0, 0), 10.0, 10.0, 7.5, 0.1)
        assert p.x == pytest.approx(1.0, abs=1e-12)
        assert p.y == pytest.approx(0.0, abs=1e-12)
        assert p.theta == 0.0

    def test_pure_rotation(self):
        p = diff_drive_update(Pose2D(0, 0, 0), -5.0, 5.0, 7.5, 0.1)
        assert p.x == pytest.approx(0.0, abs=1e-12)
        assert p.y == pytest.approx(0.0, abs=1e-12)
        assert p.theta == pytest.approx((10.0 / 7.5) * 0.1, abs=1e-12)

    def test_matches_fine_step_integration(self):
        # Same check as the acceptance suite but at a lighter sample count.
        rng = np.random.default_rng(7)
        n = 200
        x0 = rng.uniform(-50, 50, n)
        y0 = rng.uniform(-50, 50, n)
        th0 = rng.uniform(-np.pi, np.pi, n)
        vl = rng.uniform(-150, 150, n)
        vr = rng.uniform(-150, 150, n)
        ox, oy, oth = fine_step_poses(x0, y0, th0, vl, vr, 7.5, 1.0, 100000)
        for i in range(n):
            p = diff_drive_update(Pose2D(x0[i], y0[i], th0[i]), vl[i], vr[i], 7.5, 1.0)
            assert abs(p.x - ox[i]) < 1e-6
            assert abs(p.y - oy[i]) < 1e-6
            assert abs(wrap_angle(p.theta - oth[i])) < 1e-8

    def test_near_straight_branch_continuity(self):
        # Just above the omega cutoff the arc branch must agree with the
        # straight branch to the genuine physical difference (~v*dt^2*w/2),
        # i.e. the formula may not lose precision there.
        p_arc = diff_drive_update(Pose2D(0, 0, 0.3), 100.0, 100.0 + 1.2e-8, 7.5, 1.0)
        p_str = diff_drive_update(Pose2D(0, 0, 0.3), 100.0, 100.0, 7.5, 1.0)
        assert abs(p_arc.x - p_str.x) < 1e-7
        assert abs(p_arc.y - p_str.y) < 1e-7

    def test_theta_normalized(self):
        p = diff_drive_update(Pose2D(0, 0, 3.0), -150.0, 150.0, 7.5, 1.0)
        assert -math.pi < p.theta <= math.pi

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            diff_drive_update(Pose2D(0, 0, 0), 1.0, 1.0, 7.5, 0.0)


# ---------------------------------------------------------------------------
# Actuator lag
# ---------------------------------------------------------------------------

class TestMotorStep:
    def test_fixed_points(self):
        spec = PARAMS.robot
        assert motor_step(0.0, 0.0, spec, 0.05) == 0.0
        assert motor_step(spec.v_max, 100.0, spec, 0.05) == pytest.approx(spec.v_max)

    def test_closed_form_one_tau(self):
        spec = RobotSpec(v_max=150.0, motor_tau=0.05)
        got = motor_step(0.0, 100.0, spec, 0.05)
        assert got == pytest.approx(150.0 * (1.0 - math.exp(-1.0)), abs=1e-9)

    def test_matches_ode_integration(self):
        spec = RobotSpec(v_max=150.0, motor_tau=0.05)
        got = motor_step(30.0, -40.0, spec, 0.013)
        want = lag_fine_step(30.0, -60.0, 0.05, 0.013)
        assert got == pytest.approx(want, abs=1e-8)

    def test_substep_composition_is_exact(self):
        # e^(-h/tau) telescopes, so ten substeps equal one full step.
        spec = PARAMS.robot
        dt = 1.0 / 30.0
        v = 12.0
        for _ in range(10):
            v = motor_step(v, 77.0, spec, dt / 10.0)
        assert v == pytest.approx(motor_step(12.0, 77.0, spec, dt), rel=1e-12)

    def test_bounded_by_v_max(self):
        rng = np.random.default_rng(3)
        spec = PARAMS.robot
        for _ in range(500):
            v = rng.uniform(-spec.v_max, spec.v_max)
            c = rng.uniform(-100, 100)
            out = motor_step(v, c, spec, rng.uniform(1e-4, 0.2))
            assert abs(out) <= spec.v_max + 1e-12

    def test_rejects_out_of_range_command(self):
        with pytest.raises(ValueError):
            motor_step(0.0, 101.0, PARAMS.robot, 0.01)


# ---------------------------------------------------------------------------
# Ball friction
# ---------------------------------------------------------------------------

class TestBallFriction:
    def test_uniform_deceleration_stop(self):
        # v0 = 50, decel 25: stops after exactly 2 s having gone 50 cm.
        world = make_world(ball=BallState(0.0, 0.0, vx=50.0))
        dt = PARAMS.control_dt
        substep = dt / PARAMS.n_substeps
        for _ in range(59):
            world = step_world(world, [], PARAMS)
        assert math.hypot(world.ball.vx, world.ball.vy) > 0.0
        for _ in range(2):
            world = step_world(world, [], PARAMS)
        assert world.ball.vx == 0.0 and world.ball.vy == 0.0
        assert abs(world.ball.x - 50.0) <= 50.0 * substep + 1e-9

    def test_friction_preserves_direction(self):
        world = make_world(ball=BallState(0.0, 0.0, vx=30.0, vy=40.0))
        w2 = step_world(world, [], PARAMS)
        assert w2.ball.vx > 0.0 and w2.ball.vy > 0.0
        assert w2.ball.vx * 40.0 == pytest.approx(w2.ball.vy * 30.0, abs=1e-9)


# ---------------------------------------------------------------------------
# Stepping basics
# ---------------------------------------------------------------------------

class TestStepWorld:
    def test_static_world_only_clock_advances(self):
        blue = [make_robot(0, Team.BLUE, -20.0, 0.0, 0.0)]
        yellow = [make_robot(0, Team.YELLOW, 20.0, 0.0, math.pi)]
        world = make_world(blue, yellow)
        w2 = step_world(world, [WheelCommand(0, 0), WheelCommand(0, 0)], PARAMS)
        assert w2.frame == 1
        assert w2.elapsed == pytest.approx(PARAMS.control_dt)
        for a, b in zip(world.robots(), w2.robots()):
            assert (a.pose.x, a.pose.y, a.pose.theta) == (b.pose.x, b.pose.y, b.pose.theta)
        assert (w2.ball.x, w2.ball.y) == (0.0, 0.0)

    def test_input_world_not_mutated(self):
        world = make_world([make_robot(0, Team.BLUE, 0.0, 0.0, 0.0)])
        step_world(world, [WheelCommand(100, 100)], PARAMS)
        assert world.robots_blue[0].pose.x == 0.0
        assert world.robots_blue[0].wheel_left == 0.0
        assert world.frame == 0

    def test_rejects_wrong_command_count(self):
        world = make_world([make_robot(0, Team.BLUE, 0.0, 0.0, 0.0)])
        with pytest.raises(ValueError):
            step_world(world, [], PARAMS)

    def test_elapsed_is_frame_times_dt(self):
        world = make_world()
        for _ in range(45):
            world = step_world(world, [], PARAMS)
        assert world.frame == 45
        assert world.elapsed == 45 * PARAMS.control_dt

    def test_wall_pin_zeroes_reported_speed(self):
        world = make_world([make_robot(0, Team.BLUE, 60.0, 0.0, 0.0)])
        for _ in range(60):
            world = step_world(world, [WheelCommand(100, 100)], PARAMS)
        robot = world.robots_blue[0]
        bound = PARAMS.field.play_half_length - PARAMS.robot.body_radius
        assert robot.pose.x == pytest.approx(bound, abs=1e-9)
        assert abs(robot.twist.vx) < 1e-9
        # Wheels keep spinning even though the chassis is pinned.
        assert robot.wheel_left > 100.0

    def test_determinism_bit_identical(self):
        def run():
            rng = np.random.default_rng(11)
            world = make_world(
                [make_robot(0, Team.BLUE, -30.0, 10.0, 0.5)],
                [make_robot(0, Team.YELLOW, 30.0, -10.0, -2.5)],
                BallState(0.0, 0.0, vx=20.0, vy=-35.0),
            )
            for _ in range(150):
                cmds = [WheelCommand(*rng.uniform(-100, 100, 2)) for _ in range(2)]
                world = step_world(world, cmds, PARAMS)
            return world

        a, b = run(), run()
        for ra, rb in zip(a.robots(), b.robots()):
            assert (ra.pose.x, ra.pose.y, ra.pose.theta) == (rb.pose.x, rb.pose.y, rb.pose.theta)
            assert (ra.wheel_left, ra.wheel_right) == (rb.wheel_left, rb.wheel_right)
        assert (a.ball.x, a.ball.y, a.ball.vx, a.ball.vy) == (b.ball.x, b.ball.y, b.ball.vx, b.ball.vy)


# ---------------------------------------------------------------------------
# Collisions and walls
# ---------------------------------------------------------------------------

class TestCollisions:
    def test_tangent_robots_unchanged(self):
        r = PARAMS.robot.body_radius
        blue = [make_robot(0, Team.BLUE, -r, 0.0, 0.0)]
        yellow = [make_robot(0, Team.YELLOW, r, 0.0, 0.0)]
        world = make_world(blue, yellow, BallState(0.0, 30.0))
        out = resolve_collisions(world, PARAMS)
        assert out.robots_blue[0].pose.x == -r
        assert out.robots_yellow[0].pose.x == r

    def test_overlapping_robots_separate_equally(self):
        world = make_world(
            [make_robot(0, Team.BLUE, -4.0, 0.0, 0.0)],
            [make_robot(0, Team.YELLOW, 4.0, 0.0, 0.0)],
            BallState(0.0, 30.0),
        )
        out = resolve_collisions(world, PARAMS)
        r = PARAMS.robot.body_radius
        assert out.robots_blue[0].pose.x == pytest.approx(-r, abs=1e-9)
        assert out.robots_yellow[0].pose.x == pytest.approx(r, abs=1e-9)

    def test_ball_impulse_matches_two_body_oracle(self):
        ball = PARAMS.ball
        robot = PARAMS.robot
        contact = robot.body_radius + ball.radius
        world = make_world(
            [make_robot(0, Team.BLUE, 0.0, 0.0, 0.0)],
            ball=BallState(contact - 0.1, 0.0, vx=-50.0),
        )
        out = resolve_collisions(world, PARAMS)
        want = ball_speed_after_head_on(-50.0, robot.mass, ball.mass,
                                        ball.robot_restitution)
        assert out.ball.vx == pytest.approx(want, abs=1e-9)
        assert want > 0.0
        # Recoil slows the robot's drivetrain in the push-back direction.
        assert out.robots_blue[0].wheel_left < 0.0
        assert out.robots_blue[0].wheel_left == out.robots_blue[0].wheel_right

    def test_separating_ball_gets_no_impulse(self):
        contact = PARAMS.robot.body_radius + PARAMS.ball.radius
        world = make_world(
            [make_robot(0, Team.BLUE, 0.0, 0.0, 0.0)],
            ball=BallState(contact - 0.1, 0.0, vx=40.0),
        )
        out = resolve_collisions(world, PARAMS)
        assert out.ball.vx == 40.0
        assert out.ball.x - out.robots_blue[0].pose.x >= contact - 1e-9

    def test_side_wall_restitution(self):
        world = make_world(ball=BallState(0.0, 63.5, vy=60.0))
        out = resolve_collisions(world, PARAMS)
        assert out.ball.y == pytest.approx(65.0 - 2.135)
        assert out.ball.vy == pytest.approx(-0.75 * 60.0)

    def test_end_wall_reflects_outside_mouth(self):
        world = make_world(ball=BallState(74.0, 30.0, vx=80.0))
        out = resolve_collisions(world, PARAMS)
        assert out.ball.x == pytest.approx(75.0 - 2.135)
        assert out.ball.vx == pytest.approx(-0.75 * 80.0)

    def test_goal_mouth_is_open(self):
        world = make_world(ball=BallState(74.0, 0.0, vx=120.0))
        deepest = world.ball.x
        for _ in range(10):
            world = step_world(world, [], PARAMS)
            deepest = max(deepest, world.ball.x)
        # Crossed the goal line into the pocket, never past the back wall.
        assert deepest > 75.0
        assert deepest <= 85.0 - 2.135 + 1e-9

    def test_pocket_back_wall(self):
        world = make_world(ball=BallState(80.0, 0.0, vx=120.0))
        for _ in range(10):
            world = step_world(world, [], PARAMS)
        assert world.ball.x <= 85.0 - 2.135 + 1e-9
        assert world.ball.vx <= 0.0

    def test_robots_never_enter_pockets(self):
        world = make_world([make_robot(0, Team.BLUE, 65.0, 0.0, 0.0)])
        for _ in range(90):
            world = step_world(world, [WheelCommand(100, 100)], PARAMS)
        assert world.robots_blue[0].pose.x <= 75.0 - PARAMS.robot.body_radius + 1e-9

    def test_resolution_never_adds_energy(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            blue = [make_robot(0, Team.BLUE, rng.uniform(-10, 10), rng.uniform(-10, 10),
                               rng.uniform(-np.pi, np.pi),
                               wl=rng.uniform(-150, 150), wr=rng.uniform(-150, 150))]
            yellow = [make_robot(0, Team.YELLOW, rng.uniform(-10, 10), rng.uniform(-10, 10),
                                 rng.uniform(-np.pi, np.pi),
                                 wl=rng.uniform(-150, 150), wr=rng.uniform(-150, 150))]
            ball = BallState(rng.uniform(-12, 12), rng.uniform(-12, 12),
                             vx=rng.uniform(-200, 200), vy=rng.uniform(-200, 200))
            world = make_world(blue, yellow, ball)
            before = kinetic_energy(world, PARAMS)
            after = kinetic_energy(resolve_collisions(world, PARAMS), PARAMS)
            assert after <= before + 1e-6


# ---------------------------------------------------------------------------
# Global properties
# ---------------------------------------------------------------------------

class TestWorldProperties:
    def test_containment_and_separation(self):
        rng = np.random.default_rng(23)
        field = PARAMS.field
        r = PARAMS.robot.body_radius
        for trial in range(10):
            blue = [make_robot(i, Team.BLUE, rng.uniform(-60, -10), rng.uniform(-50, 50),
                               rng.uniform(-np.pi, np.pi)) for i in range(2)]
            yellow = [make_robot(i, Team.YELLOW, rng.uniform(10, 60), rng.uniform(-50, 50),
                                 rng.uniform(-np.pi, np.pi)) for i in range(2)]
            ball = BallState(rng.uniform(-30, 30), rng.uniform(-30, 30),
                             vx=rng.uniform(-100, 100), vy=rng.uniform(-100, 100))
            world = make_world(blue, yellow, ball)
            world = resolve_collisions(world, PARAMS)
            for _ in range(150):
                cmds = [WheelCommand(*rng.uniform(-100, 100, 2)) for _ in range(4)]
                world = step_world(world, cmds, PARAMS)
                assert abs(world.ball.x) <= field.back_wall_x - world.ball.radius + 1e-9
                assert abs(world.ball.y) <= field.half_width - world.ball.radius + 1e-9
                for rob in world.robots():
                    assert abs(rob.pose.x) <= field.play_half_length - r + 1e-9
                    assert abs(rob.pose.y) <= field.half_width - r + 1e-9
                    assert abs(rob.wheel_left) <= PARAMS.robot.v_max + 1e-9
                    assert abs(rob.wheel_right) <= PARAMS.robot.v_max + 1e-9
                assert pair_overlap(world, PARAMS) <= 1e-6

    def test_energy_decays_with_zero_commands(self):
        world = make_world(
            [make_robot(0, Team.BLUE, -30.0, 5.0, 0.2, wl=120.0, wr=80.0)],
            [make_robot(0, Team.YELLOW, 30.0, -5.0, 3.0, wl=-60.0, wr=-90.0)],
            BallState(0.0, 0.0, vx=90.0, vy=-40.0),
        )
        zero = [WheelCommand(0, 0), WheelCommand(0, 0)]
        energy = kinetic_energy(world, PARAMS)
        for _ in range(300):
            world = step_world(world, zero, PARAMS)
            e2 = kinetic_energy(world, PARAMS)
            assert e2 <= energy + 1e-6
            energy = e2
        assert energy < 1.0


# ---------------------------------------------------------------------------
# Angles and validation
# ---------------------------------------------------------------------------

def test_wrap_angle_range():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-50, 50, 2000):
        w = wrap_angle(x)
        assert -math.pi < w <= math.pi
        assert math.cos(w) == pytest.approx(math.cos(x), abs=1e-9)
        assert math.sin(w) == pytest.approx(math.sin(x), abs=1e-9)


def test_wrap_angle_boundaries():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)


def test_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec(goal_half_width=70.0)
    with pytest.raises(ValueError):
        FieldSpec(play_half_length=80.0)
    with pytest.raises(ValueError):
        RobotSpec(body_radius=3.0)
    with pytest.raises(ValueError):
        RobotSpec(mass=-1.0)
    with pytest.raises(ValueError):
        BallParams(friction_decel=-5.0)
    with pytest.raises(ValueError):
        SimParams(n_substeps=0)


def test_wheel_command_clamps():
    c = WheelCommand(250.0, -250.0)
    assert c.left == 100.0
    assert c.right == -100.0


def test_field_geometry():
    f = FieldSpec()
    assert f.back_wall_x == 85.0
    assert f.goal_center_own == (-85.0, 0.0)
    assert f.goal_center_adv == (85.0, 0.0)
    own, adv = f.goal_centers(Team.YELLOW)
    assert own == (85.0, 0.0) and adv == (-85.0, 0.0)
    assert f.attack_sign(Team.BLUE) == 1.0
    assert f.attack_sign(Team.YELLOW) == -1.0
