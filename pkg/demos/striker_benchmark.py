"""Benchmark the scripted striker from random spawns: fraction of episodes
ending in a goal for the attacking side, plus time-to-goal statistics.

Run: python3 demos/striker_benchmark.py --episodes 20 --seed 42
"""

import argparse
import time

import numpy as np

from vsskit.env import EpisodeConfig, ResetMode, SoccerEnv
from vsskit.physics import Team
from vsskit.policies import make_policy


def run_episode(env, policy, seed):
    env.reset(seed=seed)
    steps = 0
    while True:
        cmd = policy.command(env.world, env.params, Team.BLUE, 0)
        result = env.step([(cmd.left, cmd.right)])
        steps += 1
        if result.done:
            return result.info.get("goal"), steps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--episodes", type=int, default=20)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--agent", default="goto-ball-goal",
                    choices=("chase", "goto-ball-goal"))
    ap.add_argument("--max-duration", type=float, default=30.0)
    args = ap.parse_args()

    cfg = EpisodeConfig(reset_mode=ResetMode.UNIFORM_RANDOM,
                        end_on_goal=True, max_duration=args.max_duration,
                        n_opponents=0)
    env = SoccerEnv(cfg)
    policy = make_policy(args.agent)
    root = np.random.SeedSequence(args.seed)

    goals, own_goals, timeouts = 0, 0, 0
    goal_steps = []
    t0 = time.perf_counter()
    for i in range(args.episodes):
        outcome, steps = run_episode(env, policy, root.spawn(1)[0])
        if outcome == "blue":
            goals += 1
            goal_steps.append(steps)
        elif outcome == "yellow":
            own_goals += 1
        else:
            timeouts += 1
    wall = time.perf_counter() - t0

    n = args.episodes
    print(f"agent {args.agent!r}, {n} episodes from uniform random spawns, "
          f"seed {args.seed}")
    print(f"  scored      {goals:4d}  ({100.0 * goals / n:.1f}%)")
    print(f"  own goals   {own_goals:4d}")
    print(f"  timeouts    {timeouts:4d}  (cap {args.max_duration:.0f} s)")
    if goal_steps:
        arr = np.asarray(goal_steps, dtype=float) * cfg.control_dt
        print(f"  time to goal: mean {arr.mean():.2f} s, "
              f"median {np.median(arr):.2f} s, worst {arr.max():.2f} s")
    print(f"  simulated {n} episodes in {wall:.1f} s wall time")


if __name__ == "__main__":
    main()
