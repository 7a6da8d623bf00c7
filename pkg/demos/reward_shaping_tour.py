"""Shaped reward walkthrough: the bounded ball potential, why the potential
gradient term telescopes over an episode, and the weighted combination.

Run: python3 demos/reward_shaping_tour.py
"""

import numpy as np

from vsskit.env import EpisodeConfig, ResetMode, SoccerEnv
from vsskit.physics import FieldSpec, Team
from vsskit.policies import make_policy
from vsskit.reward import RewardWeights, ball_potential, combine


def main():
    field = FieldSpec()
    print("== ball potential anchors ==")
    own, adv = field.goal_centers(Team.BLUE)
    for label, pos in (("own goal center", own),
                       ("adversary goal center", adv),
                       ("field center", (0.0, 0.0))):
        print(f"  phi{pos} = {ball_potential(pos, field):+.6f}   ({label})")
    print("  the potential is ((d_own - d_adv)/norm - 1)/2, pinned to [-1, 0]")

    rng = np.random.default_rng(3)
    samples = np.column_stack([
        rng.uniform(-field.play_half_length, field.play_half_length, 5000),
        rng.uniform(-field.half_width, field.half_width, 5000),
    ])
    values = [ball_potential((x, y), field) for x, y in samples]
    print(f"  over 5000 random ball positions: min {min(values):.4f}, "
          f"max {max(values):.4f}")

    print("\n== telescoping over a real episode ==")
    cfg = EpisodeConfig(seed=4, reset_mode=ResetMode.UNIFORM_RANDOM,
                        end_on_goal=False, max_duration=10.0)
    env = SoccerEnv(cfg)
    env.reset()
    striker = make_policy("chase")
    phi0 = ball_potential((env.world.ball.x, env.world.ball.y), field)
    grad_sum = 0.0
    steps = 0
    while True:
        cmd = striker.command(env.world, env.params, Team.BLUE, 0)
        result = env.step([(cmd.left, cmd.right)])
        grad_sum += result.rewards[0].r_potential_grad * cfg.control_dt
        steps += 1
        if result.done:
            break
    phi1 = ball_potential((env.world.ball.x, env.world.ball.y), field)
    print(f"  {steps} steps of a striker shoving the ball around")
    print(f"  sum(r_p * dt)        = {grad_sum:+.9f}")
    print(f"  phi(end) - phi(start) = {phi1 - phi0:+.9f}")
    print(f"  difference            = {abs(grad_sum - (phi1 - phi0)):.2e}")
    print("  every intermediate potential cancels; only the endpoints remain,")
    print("  so the shaping term cannot change which policies are optimal.")

    print("\n== the weighted sum ==")
    w = RewardWeights()
    print(f"  weights: w_g={w.w_g}, w_m={w.w_m}, w_p={w.w_p}, w_e={w.w_e}")
    b = combine(r_goal=1.0, r_move=12.0, r_potential_grad=0.5,
                r_energy=-(abs(70.0) + abs(-30.0)), weights=w)
    print(f"  a scoring step pushing the ball forward at full tilt:")
    print(f"    goal {b.r_goal:+.3f} * {w.w_g}  move {b.r_move:+.3f} * {w.w_m}"
          f"  grad {b.r_potential_grad:+.3f} * {w.w_p}"
          f"  energy {b.r_energy:+.1f} * {w.w_e}")
    print(f"    total = {b.total:+.6f}")
    wd = RewardWeights.for_discrete()
    print(f"  discrete wrapper zeroes the energy term: w_e={wd.w_e}")


if __name__ == "__main__":
    main()
