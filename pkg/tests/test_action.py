"""Action-layer tests: kinematics round trips, proportional clamping,
virtual-target arithmetic, and closed-loop controller convergence."""

import math

import numpy as np
import pytest

from vsskit.action import (
    ActionConfig,
    DiscreteAction,
    HighLevelAction,
    TARGET_RADIUS_STEP,
    TARGET_ROTATION_STEP,
    VirtualTarget,
    apply_discrete,
    continuous_to_wheels,
    discrete_step_pipeline,
    goto_controller,
    twist_to_wheel_speeds,
    wheel_speeds_to_command,
    wheel_speeds_to_twist,
)
from vsskit.physics import Pose2D, SimParams, Team, WheelCommand, step_world, wrap_angle
from test_physics import make_robot, make_world

CFG = ActionConfig()
PARAMS = SimParams()
L = PARAMS.robot.axle_length


class TestKinematics:
    def test_straight(self):
        assert twist_to_wheel_speeds(10.0, 0.0, L) == (10.0, 10.0)

    def test_spin_in_place(self):
        v_l, v_r = twist_to_wheel_speeds(0.0, 2.0, 7.5)
        assert (v_l, v_r) == (-7.5, 7.5)

    def test_worked_values(self):
        v_l, v_r = twist_to_wheel_speeds(20.0, -1.0, 7.5)
        assert v_l == 23.75 and v_r == 16.25

    def test_round_trip(self):
        rng = np.random.default_rng(6)
        for _ in range(300):
            v = rng.uniform(-CFG.v_max, CFG.v_max)
            w = rng.uniform(-CFG.omega_max, CFG.omega_max)
            v_l, v_r = twist_to_wheel_speeds(v, w, L)
            v2, w2 = wheel_speeds_to_twist(v_l, v_r, L)
            assert abs(v2 - v) < 1e-9
            assert abs(w2 - w) < 1e-9

    def test_wheels_reproduce_twist_in_physics(self):
        # Driving the arc update with the derived wheels must realize the
        # requested twist: theta advances by w*dt and the chord length
        # matches |2 (v/w) sin(w dt / 2)|.
        v, w, dt = 20.0, -1.0, 0.4
        v_l, v_r = twist_to_wheel_speeds(v, w, L)
        p = Pose2D(0.0, 0.0, 0.7)
        from vsskit.physics import diff_drive_update
        q = diff_drive_update(p, v_l, v_r, L, dt)
        assert wrap_angle(q.theta - p.theta) == pytest.approx(w * dt, abs=1e-12)
        chord = math.hypot(q.x - p.x, q.y - p.y)
        assert chord == pytest.approx(abs(2.0 * (v / w) * math.sin(0.5 * w * dt)), abs=1e-9)


class TestCommandScaling:
    def test_full_speed_maps_to_100(self):
        cmd = wheel_speeds_to_command(150.0, -150.0, 150.0)
        assert (cmd.left, cmd.right) == (100.0, -100.0)

    def test_proportional_overflow(self):
        cmd = wheel_speeds_to_command(300.0, 150.0, 150.0)
        assert cmd.left == pytest.approx(100.0)
        assert cmd.right == pytest.approx(50.0)

    def test_turn_sign_preserved_under_clamp(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            v_l, v_r = rng.uniform(-400, 400, 2)
            cmd = wheel_speeds_to_command(v_l, v_r, 150.0)
            assert abs(cmd.left) <= 100.0 + 1e-12
            assert abs(cmd.right) <= 100.0 + 1e-12
            if v_r != v_l:
                assert math.copysign(1, cmd.right - cmd.left) == math.copysign(1, v_r - v_l)

    def test_continuous_to_wheels_composition(self):
        cmd = continuous_to_wheels(HighLevelAction(15.0, 0.0), L, 150.0)
        assert cmd.left == pytest.approx(10.0)
        assert cmd.right == pytest.approx(10.0)


class TestVirtualTarget:
    def test_keep_is_identity(self):
        t = VirtualTarget(30.0, 0.0)
        assert apply_discrete(t, DiscreteAction.KEEP) == t

    def test_rotate_steps(self):
        t = VirtualTarget(30.0, 0.0)
        up = apply_discrete(t, DiscreteAction.ROTATE_CCW)
        dn = apply_discrete(t, DiscreteAction.ROTATE_CW)
        assert up.phi == math.pi / 12.0
        assert dn.phi == -math.pi / 12.0
        assert up.r == dn.r == 30.0

    def test_radius_steps_and_clamps(self):
        t = VirtualTarget(6.0, 0.0)
        assert apply_discrete(t, DiscreteAction.RETRACT).r == 0.0
        assert apply_discrete(t, DiscreteAction.EXTEND).r == 18.0
        near_max = VirtualTarget(CFG.r_max - 5.0, 1.0)
        assert apply_discrete(near_max, DiscreteAction.EXTEND, CFG.r_max).r == CFG.r_max

    def test_inverse_pairs(self):
        t = VirtualTarget(40.0, 0.3)
        t2 = apply_discrete(apply_discrete(t, DiscreteAction.ROTATE_CCW),
                            DiscreteAction.ROTATE_CW)
        assert t2.phi == pytest.approx(t.phi, abs=1e-15)
        t3 = apply_discrete(apply_discrete(t, DiscreteAction.EXTEND),
                            DiscreteAction.RETRACT)
        assert t3.r == pytest.approx(t.r, abs=1e-12)

    def test_random_sequences_track_exact_arithmetic(self):
        rng = np.random.default_rng(14)
        t = VirtualTarget(20.0, 0.0)
        r, phi = 20.0, 0.0
        for a in rng.integers(1, 6, 400):
            t = apply_discrete(t, DiscreteAction(a), CFG.r_max)
            if a == 2:
                phi = wrap_angle(phi - TARGET_ROTATION_STEP)
            elif a == 3:
                phi = wrap_angle(phi + TARGET_ROTATION_STEP)
            elif a == 4:
                r = min(CFG.r_max, r + TARGET_RADIUS_STEP)
            elif a == 5:
                r = max(0.0, r - TARGET_RADIUS_STEP)
            assert t.r == r
            assert t.phi == phi

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            VirtualTarget(-1.0, 0.0)


class TestGotoController:
    def test_converged_gives_zero(self):
        act = goto_controller(Pose2D(5.0, -3.0, 1.0), (5.0, -3.0), CFG)
        assert act.v == 0.0 and act.omega == 0.0

    def test_target_ahead(self):
        act = goto_controller(Pose2D(0, 0, 0), (20.0, 0.0), CFG)
        assert act.omega == 0.0
        assert act.v > 0.0

    def test_target_behind_drives_reverse(self):
        act = goto_controller(Pose2D(0, 0, 0), (-20.0, 0.0), CFG)
        assert act.omega == pytest.approx(0.0, abs=1e-12)
        assert act.v < 0.0

    def test_heading_flip_symmetry(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            pose = Pose2D(rng.uniform(-50, 50), rng.uniform(-50, 50),
                          rng.uniform(-np.pi, np.pi))
            target = (rng.uniform(-50, 50), rng.uniform(-50, 50))
            alpha = rng.uniform(-np.pi, np.pi)
            base = goto_controller(pose, target, CFG)
            ca, sa = math.cos(alpha), math.sin(alpha)
            pose_r = Pose2D(ca * pose.x - sa * pose.y, sa * pose.x + ca * pose.y,
                            pose.theta + alpha)
            target_r = (ca * target[0] - sa * target[1],
                        sa * target[0] + ca * target[1])
            rot = goto_controller(pose_r, target_r, CFG)
            assert rot.omega == pytest.approx(base.omega, abs=1e-9)
            assert rot.v == pytest.approx(base.v, abs=1e-9)

    def test_outputs_in_envelope(self):
        rng = np.random.default_rng(20)
        for _ in range(300):
            pose = Pose2D(rng.uniform(-70, 70), rng.uniform(-60, 60),
                          rng.uniform(-np.pi, np.pi))
            act = goto_controller(pose, (rng.uniform(-70, 70), rng.uniform(-60, 60)), CFG)
            assert abs(act.v) <= CFG.v_max
            assert abs(act.omega) <= CFG.omega_max

    def test_closed_loop_convergence(self):
        # Empirical convergence: from random poses the robot must enter a
        # 2 cm disc around random in-field targets well inside 10 s.
        rng = np.random.default_rng(33)
        for _ in range(100):
            world = make_world([make_robot(0, Team.BLUE, rng.uniform(-60, 60),
                                           rng.uniform(-50, 50),
                                           rng.uniform(-np.pi, np.pi))])
            target = (rng.uniform(-60, 60), rng.uniform(-50, 50))
            reached = False
            for _ in range(300):
                robot = world.robots_blue[0]
                if math.hypot(robot.pose.x - target[0], robot.pose.y - target[1]) < 2.0:
                    reached = True
                    break
                act = goto_controller(robot.pose, target, CFG)
                cmd = continuous_to_wheels(act, L, CFG.v_max)
                world = step_world(world, [cmd], PARAMS)
            assert reached


class TestDiscretePipeline:
    def test_identity_composition(self):
        cmd, target = discrete_step_pipeline(Pose2D(0, 0, 0), VirtualTarget(0.0, 0.0),
                                             DiscreteAction.KEEP, L, CFG)
        assert (cmd.left, cmd.right) == (0.0, 0.0)
        assert target.r == 0.0

    def test_repeated_extend_drives_forward(self):
        world = make_world([make_robot(0, Team.BLUE, 0.0, 0.0, 0.0)])
        target = VirtualTarget(0.0, 0.0)
        for _ in range(45):
            robot = world.robots_blue[0]
            cmd, target = discrete_step_pipeline(robot.pose, target,
                                                 DiscreteAction.EXTEND, L, CFG)
            world = step_world(world, [cmd], PARAMS)
        assert target.r == CFG.r_max or target.r == pytest.approx(45 * 12.0)
        assert world.robots_blue[0].pose.x > 20.0
        assert abs(world.robots_blue[0].pose.y) < 1.0

    def test_commands_always_in_range(self):
        rng = np.random.default_rng(25)
        target = VirtualTarget(10.0, 0.5)
        pose = Pose2D(0, 0, 0)
        for a in rng.integers(1, 6, 500):
            cmd, target = discrete_step_pipeline(pose, target, DiscreteAction(a), L, CFG)
            assert -100.0 <= cmd.left <= 100.0
            assert -100.0 <= cmd.right <= 100.0
            assert 0.0 <= target.r <= CFG.r_max
