"""Reward component tests: hand-derived anchor values, telescoping
identities, bounds, and exact weighted-sum reproduction."""

import math

import numpy as np
import pytest

from vsskit.physics import FieldSpec, Team, WheelCommand
from vsskit.reward import (
    RewardWeights,
    ball_potential,
    combine,
    reward_energy,
    reward_move,
    reward_potential_grad,
)

FIELD = FieldSpec()
DT = 1.0 / 30.0


class TestBallPotential:
    # Anchors derived by hand: at the own goal center d_own = 0 and
    # d_adv = 170, giving ((0 - 170)/170 - 1)/2 = -1; swapped at the
    # adversary goal gives 0; equidistant on the goal axis gives -0.5.
    def test_own_goal_center(self):
        assert ball_potential((-85.0, 0.0), FIELD) == pytest.approx(-1.0, abs=1e-12)

    def test_adversary_goal_center(self):
        assert ball_potential((85.0, 0.0), FIELD) == pytest.approx(0.0, abs=1e-12)

    def test_center_symmetry(self):
        assert ball_potential((0.0, 0.0), FIELD) == pytest.approx(-0.5, abs=1e-12)

    def test_team_perspectives_mirror(self):
        for pos in [(30.0, -12.0), (-61.0, 40.0), (5.0, 5.0)]:
            bp_b = ball_potential(pos, FIELD, Team.BLUE)
            bp_y = ball_potential(pos, FIELD, Team.YELLOW)
            assert bp_b + bp_y == pytest.approx(-1.0, abs=1e-12)

    def test_bounded_over_arena(self):
        rng = np.random.default_rng(31)
        xs = rng.uniform(-FIELD.back_wall_x, FIELD.back_wall_x, 10000)
        ys = rng.uniform(-FIELD.half_width, FIELD.half_width, 10000)
        for x, y in zip(xs, ys):
            bp = ball_potential((x, y), FIELD)
            assert -1.0 <= bp <= 0.0

    def test_monotone_along_goal_axis(self):
        values = [ball_potential((x, 0.0), FIELD) for x in np.linspace(-85, 85, 50)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestRewardMove:
    def test_zero_for_unchanged_positions(self):
        assert reward_move((3, 4), (10, 4), (3, 4), (10, 4), DT) == 0.0

    def test_one_cm_toward_ball(self):
        got = reward_move((11.0, 0.0), (20.0, 0.0), (10.0, 0.0), (20.0, 0.0), DT)
        assert got == pytest.approx(30.0, abs=1e-9)

    def test_one_cm_away(self):
        got = reward_move((9.0, 0.0), (20.0, 0.0), (10.0, 0.0), (20.0, 0.0), DT)
        assert got == pytest.approx(-30.0, abs=1e-9)

    def test_telescoping_over_random_walk(self):
        rng = np.random.default_rng(8)
        agent = np.array([0.0, 0.0])
        ball = np.array([40.0, 10.0])
        d_start = math.hypot(*(ball - agent))
        total = 0.0
        for _ in range(1000):
            prev_agent, prev_ball = agent.copy(), ball.copy()
            agent = agent + rng.uniform(-2, 2, 2)
            ball = ball + rng.uniform(-1, 1, 2)
            total += reward_move(agent, ball, prev_agent, prev_ball, DT) * DT
        d_end = math.hypot(*(ball - agent))
        assert total == pytest.approx(d_start - d_end, abs=1e-6)

    def test_antisymmetry(self):
        a, b = (1.0, 2.0), (30.0, -5.0)
        a2, b2 = (4.0, 0.0), (28.0, -2.0)
        fwd = reward_move(a2, b2, a, b, DT)
        rev = reward_move(a, b, a2, b2, DT)
        assert fwd == pytest.approx(-rev, abs=1e-12)


class TestPotentialGrad:
    def test_zero_when_unchanged(self):
        assert reward_potential_grad(-0.4, -0.4, DT) == 0.0

    def test_direct_evaluation(self):
        assert reward_potential_grad(-0.49, -0.50, DT) == pytest.approx(0.3, abs=1e-9)

    def test_telescoping(self):
        rng = np.random.default_rng(12)
        bps = rng.uniform(-1.0, 0.0, 500)
        total = sum(reward_potential_grad(bps[i], bps[i - 1], DT) * DT
                    for i in range(1, len(bps)))
        assert total == pytest.approx(bps[-1] - bps[0], abs=1e-6)


class TestRewardEnergy:
    def test_zero_command(self):
        assert reward_energy(WheelCommand(0, 0)) == 0.0

    def test_absolute_sum(self):
        assert reward_energy(WheelCommand(-30, 50)) == -80.0

    def test_saturated(self):
        assert reward_energy(WheelCommand(100, 100)) == -200.0

    def test_nonpositive(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            cmd = WheelCommand(*rng.uniform(-120, 120, 2))
            r = reward_energy(cmd)
            assert r <= 0.0
            if cmd.left == 0.0 and cmd.right == 0.0:
                assert r == 0.0


class TestCombine:
    def test_all_zero(self):
        assert combine(0, 0, 0, 0, RewardWeights()).total == 0.0

    def test_goal_only(self):
        assert combine(1.0, 0, 0, 0, RewardWeights()).total == 1.0

    def test_published_weights_arithmetic(self):
        out = combine(0.0, 1.0, 1.0, -80.0, RewardWeights())
        assert out.total == pytest.approx(0.02 + 0.08 - 80e-5, abs=1e-15)
        assert out.total == pytest.approx(0.0992, abs=1e-12)

    def test_exact_reproduction_on_random_tuples(self):
        rng = np.random.default_rng(4)
        w = RewardWeights()
        for _ in range(100):
            rg, rm, rp = rng.uniform(-1, 1, 3)
            re = -rng.uniform(0, 200)
            out = combine(rg, rm, rp, re, w)
            assert out.total == w.w_g * rg + w.w_m * rm + w.w_p * rp + w.w_e * re

    def test_linear_in_each_component(self):
        w = RewardWeights()
        base = combine(0.0, 2.0, -1.0, -10.0, w).total
        bumped = combine(0.0, 5.0, -1.0, -10.0, w).total
        assert bumped - base == pytest.approx(w.w_m * 3.0, abs=1e-12)

    def test_default_weights(self):
        w = RewardWeights()
        assert (w.w_g, w.w_m, w.w_p, w.w_e) == (1.0, 0.02, 0.08, 1e-5)
        assert RewardWeights.for_discrete().w_e == 0.0


def test_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        reward_move((0, 0), (1, 1), (0, 0), (1, 1), 0.0)
    with pytest.raises(ValueError):
        reward_potential_grad(0.0, 0.0, -1.0)
