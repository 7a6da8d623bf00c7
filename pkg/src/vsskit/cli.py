"""Operator entry point.

Subcommands:

    rollout        seeded scripted-policy episodes -> CSV log + metrics
    collect        actuator characterization drive -> trajectory CSV
    train-adaptor  trajectory CSV -> model file + loss-history CSV
    eval-adaptor   closed-loop comparison table (clean / raw / adapted)
    serve          UDP state/command server over a live world
    replay         rollout log -> numbered SVG frames
    metrics        recompute metrics from a rollout log

Global flags ``--config``, ``--seed`` and ``--out`` work on every subcommand;
explicit flags override config-file values. Each writing subcommand drops
exactly one ``manifest.json`` in its output directory (config snapshot, seed,
version, start time, output names). The manifest embeds the wall-clock start
time, so it is the one file reproducibility comparisons must skip; everything
else written with the same seed is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .config import KitConfig, load_config, render_config
from .env import ActionMode, EpisodeConfig, SoccerEnv
from .metrics import (RolloutRow, metrics_from_log, metrics_from_rows,
                      write_rollout_log)
from .netproto import ChannelModel, ServerConfig, SimServer
from .physics import Team
from .policies import POLICIES, make_policy
from .replay import replay_log
from .sim2real import (collect_trajectories, dataset_arrays, eval_closed_loop,
                       format_report, identity_plant, load_model, mlp_train,
                       read_log, samples_from_log, save_model)

MANIFEST_NAME = "manifest.json"


def _out_dir(args, command: str) -> Path:
    if args.out is None:
        raise ValueError(f"{command} needs --out <directory>")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, seed: int, cfg: KitConfig,
                    outputs: Sequence[str]) -> None:
    manifest = {
        "command": command,
        "seed": seed,
        "version": __version__,
        "started": datetime.now(timezone.utc).isoformat(),
        "config": render_config(cfg),
        "outputs": sorted(outputs),
    }
    with open(out / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _json_dump(payload: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- rollout -------------------------------------------------------------


def _run_episode(cfg: KitConfig, agent: str, index: int,
                 seed: int) -> List[RolloutRow]:
    episode = dataclasses.replace(cfg.episode, seed=0)
    env = SoccerEnv(episode, cfg.params, action_mode=ActionMode.WHEEL,
                    weights=cfg.weights, action_config=cfg.action)
    policy = make_policy(agent, cfg.action)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, 1)))
    env.reset(seed=np.random.SeedSequence(seed, spawn_key=(index,)))
    v_max = cfg.params.robot.v_max
    rows: List[RolloutRow] = []
    step = 0
    while not env.done:
        cmd = policy.command(env.world, cfg.params, Team.BLUE, 0, rng)
        result = env.step([cmd])
        world = result.info["world"]
        me = world.robots_blue[0]
        v_d, w_d = result.info["desired"][0]
        v_obs, w_obs = result.info["observed"][0]
        breakdown = result.rewards[0]
        goal = result.info["goal"]
        rows.append(RolloutRow(
            episode=index, step=step, t=world.elapsed,
            ball_x=world.ball.x, ball_y=world.ball.y,
            ball_vx=world.ball.vx, ball_vy=world.ball.vy,
            x=me.pose.x, y=me.pose.y, theta=me.pose.theta,
            vx=me.twist.vx, vy=me.twist.vy, omega=me.twist.omega,
            v_d=v_d, w_d=w_d, v_obs=v_obs, w_obs=w_obs,
            vl_cmd=cmd.left * v_max / 100.0, vr_cmd=cmd.right * v_max / 100.0,
            r_goal=breakdown.r_goal, r_move=breakdown.r_move,
            r_potential_grad=breakdown.r_potential_grad,
            r_energy=breakdown.r_energy, reward=breakdown.total,
            goal="" if goal is None else goal.value,
            score_own=result.info["score"][0],
            score_adv=result.info["score"][1]))
        step += 1
    return rows


def cmd_rollout(args) -> int:
    cfg = load_config(args.config)
    if args.agent not in POLICIES:
        raise ValueError(f"unknown agent {args.agent!r}; "
                         f"choose from {sorted(POLICIES)}")
    seed = args.seed if args.seed is not None else cfg.episode.seed
    out = _out_dir(args, "rollout")
    indices = range(args.episodes)
    if args.workers > 1:
        # episodes are seeded independently, so sharding cannot reorder
        # anything observable; merge is by episode index
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            per_episode = list(pool.map(
                lambda i: _run_episode(cfg, args.agent, i, seed), indices))
    else:
        per_episode = [_run_episode(cfg, args.agent, i, seed) for i in indices]
    rows = [row for ep_rows in per_episode for row in ep_rows]
    report = metrics_from_rows(rows, window=args.window)
    write_rollout_log(rows, out / "rollout.csv")
    _json_dump(report.to_dict(), out / "metrics.json")
    _write_manifest(out, "rollout", seed, cfg, ["rollout.csv", "metrics.json"])
    print(report.render())
    return 0


# -- adaptor pipeline ----------------------------------------------------


def cmd_collect(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.episode.seed
    out = _out_dir(args, "collect")
    plant = identity_plant() if args.plant == "identity" else cfg.plant
    rows = collect_trajectories(plant, duration=args.duration, seed=seed,
                                hold=args.hold, params=cfg.params,
                                path=out / "trajectories.csv")
    _write_manifest(out, "collect", seed, cfg, ["trajectories.csv"])
    print(f"wrote {len(rows)} rows ({args.duration:.0f} s at "
          f"{1.0 / cfg.params.control_dt:.0f} Hz) to {out / 'trajectories.csv'}")
    return 0


def cmd_train_adaptor(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.training.seed
    out = _out_dir(args, "train-adaptor")
    rows = read_log(args.data)
    samples = samples_from_log(rows, dt=cfg.params.control_dt,
                               use_prev_commands=cfg.use_prev_commands)
    if not samples:
        raise ValueError(f"{args.data}: no usable training pairs in file")
    train_cfg = dataclasses.replace(cfg.training, seed=seed,
                                    epochs=args.epochs or cfg.training.epochs)
    result = mlp_train(samples, train_cfg)
    save_model(result.params, out / "model.vsmlp")
    with open(out / "loss_history.csv", "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("epoch,train_loss,val_loss\n")
        for i, (tr, va) in enumerate(zip(result.train_loss, result.val_loss)):
            fh.write(f"{i},{tr!r},{va!r}\n")
    _write_manifest(out, "train-adaptor", seed, cfg,
                    ["model.vsmlp", "loss_history.csv"])
    X, Y = dataset_arrays(samples)
    print(f"trained on {len(samples)} pairs for {train_cfg.epochs} epochs; "
          f"RMSE over the log {result.val_rmse(X, Y):.4f} cm/s")
    return 0


def cmd_eval_adaptor(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else 500
    adaptor = load_model(args.model)
    plant = identity_plant() if args.plant == "identity" else cfg.plant
    report = eval_closed_loop(plant=plant, adaptor=adaptor,
                              episodes=args.episodes, seed=seed,
                              max_duration=args.max_duration,
                              params=cfg.params)
    print(format_report(report))
    if args.out is not None:
        out = _out_dir(args, "eval-adaptor")
        payload = {
            "ratio": report.ratio, "t_stat": report.t_stat,
            "p_value": report.p_value,
            "arms": {arm.name: {
                "episodes": arm.episodes, "mean_steps": arm.mean_steps,
                "sd_steps": arm.sd_steps, "goals": arm.goals,
                "own_goals": arm.own_goals, "timeouts": arm.timeouts,
            } for arm in (report.clean, report.raw, report.adapted)},
        }
        _json_dump(payload, out / "report.json")
        _write_manifest(out, "eval-adaptor", seed, cfg, ["report.json"])
    return 0


# -- serving and inspection ----------------------------------------------


def cmd_serve(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.episode.seed
    env = SoccerEnv(cfg.episode, cfg.params, action_mode=ActionMode.WHEEL,
                    weights=cfg.weights, action_config=cfg.action)
    env.reset(seed=seed)
    channel: Optional[ChannelModel] = cfg.channel if cfg.channel_enabled else None
    server_cfg = ServerConfig(
        host=args.host, state_port=args.state_port,
        command_port=args.command_port, rate_hz=args.rate_hz,
        lockstep=args.lockstep, realtime=not args.fast,
        channel=channel, max_steps=args.max_steps, max_wall=args.max_wall)
    server = SimServer(env, server_cfg)
    server.start()
    mode = "lock-step" if args.lockstep else "free-run"
    print(f"serving {mode} on state={server.state_port} "
          f"command={server.command_port} at {server_cfg.rate_hz:.0f} Hz",
          flush=True)
    try:
        server.run()
    except KeyboardInterrupt:
        pass
    finally:
        server.close()
    print(f"served {server.stats['steps']} steps, "
          f"{server.stats['episodes']} episode resets")
    return 0


def cmd_replay(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(args, "replay")
    summary = replay_log(args.log, out, cfg.params)
    seed = args.seed if args.seed is not None else cfg.episode.seed
    outputs = [f"frame_{i:06d}.svg" for i in range(summary.frames)]
    _write_manifest(out, "replay", seed, cfg, outputs)
    print(f"wrote {summary.frames} frames to {out}; "
          f"final score {summary.final_score[0]}-{summary.final_score[1]}")
    return 0


def cmd_metrics(args) -> int:
    report = metrics_from_log(args.log, window=args.window)
    print(report.render())
    if args.out is not None:
        cfg = load_config(args.config)
        out = _out_dir(args, "metrics")
        _json_dump(report.to_dict(), out / "metrics.json")
        seed = args.seed if args.seed is not None else 0
        _write_manifest(out, "metrics", seed, cfg, ["metrics.json"])
    return 0


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", default=None,
                        help="kit config file (defaults apply when omitted)")
    common.add_argument("--seed", type=int, default=None,
                        help="override the command's seed")
    common.add_argument("--out", metavar="DIR", default=None,
                        help="output directory")

    parser = argparse.ArgumentParser(
        prog="vsskit", description="small-size soccer simulation kit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rollout", parents=[common],
                       help="run scripted-policy episodes, log and score them")
    p.add_argument("--agent", default="goto-ball-goal",
                   help=f"one of {sorted(POLICIES)}")
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--workers", type=int, default=1,
                   help="episode shards run on this many threads")
    p.add_argument("--window", type=int, default=100,
                   help="goal score window in steps")
    p.set_defaults(func=cmd_rollout)

    p = sub.add_parser("collect", parents=[common],
                       help="drive excitation commands, log the plant response")
    p.add_argument("--duration", type=float, default=30.0,
                   help="simulated seconds to record")
    p.add_argument("--hold", type=int, default=5,
                   help="steps each random command is held")
    p.add_argument("--plant", choices=("identity", "pseudo-real"),
                   default="pseudo-real")
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("train-adaptor", parents=[common],
                       help="fit the inverse-dynamics net on a trajectory log")
    p.add_argument("--data", metavar="CSV", required=True)
    p.add_argument("--epochs", type=int, default=None,
                   help="override the configured epoch count")
    p.set_defaults(func=cmd_train_adaptor)

    p = sub.add_parser("eval-adaptor", parents=[common],
                       help="closed-loop comparison: clean / raw / adapted")
    p.add_argument("--model", metavar="FILE", required=True)
    p.add_argument("--episodes", type=int, default=30)
    p.add_argument("--plant", choices=("identity", "pseudo-real"),
                   default="pseudo-real")
    p.add_argument("--max-duration", type=float, default=300.0,
                   help="episode cap in simulated seconds")
    p.set_defaults(func=cmd_eval_adaptor)

    p = sub.add_parser("serve", parents=[common],
                       help="broadcast state and accept commands over UDP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state-port", type=int, default=9001)
    p.add_argument("--command-port", type=int, default=9002)
    p.add_argument("--rate-hz", type=float, default=30.0)
    p.add_argument("--lockstep", action="store_true",
                   help="advance only when all controlled robots have commands")
    p.add_argument("--fast", action="store_true",
                   help="free-run without real-time pacing")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--max-wall", type=float, default=None,
                   help="stop after this many wall seconds")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", parents=[common],
                       help="render a rollout log to SVG frames")
    p.add_argument("--log", metavar="CSV", required=True)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("metrics", parents=[common],
                       help="recompute metrics from a rollout log")
    p.add_argument("--log", metavar="CSV", required=True)
    p.add_argument("--window", type=int, default=100)
    p.set_defaults(func=cmd_metrics)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
