"""Perturbed plant stand-in and trajectory collection.

A PseudoRealPlant distorts wheel commands the way a worn drivetrain does:
per-side gain imbalance, a dead zone around zero, command latency, and
optional actuation noise. Installed as the environment command filter it
turns the clean simulator into a mismatched one, which is the regime the
inverse-dynamics adaptor is trained to undo.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Optional, Sequence

import numpy as np

from ..env import ActionMode, EpisodeConfig, ResetMode, SoccerEnv
from ..physics import SimParams, WheelCommand
from .data import LogRow, write_log


@dataclass(frozen=True)
class PseudoRealPlant:
    gain_left: float = 0.8
    gain_right: float = 1.2
    dead_zone: float = 5.0
    latency_steps: int = 1
    noise_scale: float = 0.0

    def __post_init__(self):
        if self.gain_left <= 0.0 or self.gain_right <= 0.0:
            raise ValueError("gains must be positive")
        if self.dead_zone < 0.0 or self.noise_scale < 0.0:
            raise ValueError("dead_zone and noise_scale must be non-negative")
        if self.latency_steps < 0:
            raise ValueError("latency_steps must be non-negative")

    def make_filter(self, seed: Optional[int | np.random.SeedSequence] = 0) -> "PlantFilter":
        return PlantFilter(self, np.random.default_rng(seed))


def identity_plant() -> PseudoRealPlant:
    """A plant that passes commands through untouched."""
    return PseudoRealPlant(gain_left=1.0, gain_right=1.0, dead_zone=0.0,
                           latency_steps=0, noise_scale=0.0)


class PlantFilter:
    """Stateful command transform: latency queue, then per wheel dead zone,
    gain, noise, clamp. One queue per robot slot, zero-prefilled, so the
    first latency_steps commands applied are rest commands."""

    def __init__(self, plant: PseudoRealPlant, rng: np.random.Generator):
        self.plant = plant
        self.rng = rng
        self._queues: List[Deque[WheelCommand]] = []

    def _distort(self, value: float, gain: float) -> float:
        if abs(value) < self.plant.dead_zone:
            value = 0.0
        value *= gain
        if self.plant.noise_scale > 0.0:
            value += self.rng.normal(0.0, self.plant.noise_scale)
        return value

    def __call__(self, commands: Sequence[WheelCommand]) -> List[WheelCommand]:
        if len(self._queues) != len(commands):
            self._queues = [deque([WheelCommand(0.0, 0.0)] * self.plant.latency_steps)
                            for _ in commands]
        out = []
        for queue, cmd in zip(self._queues, commands):
            queue.append(cmd)
            delayed = queue.popleft()
            out.append(WheelCommand(self._distort(delayed.left, self.plant.gain_left),
                                    self._distort(delayed.right, self.plant.gain_right)))
        return out


def collect_trajectories(plant: PseudoRealPlant, duration: float = 30.0,
                         seed: int = 0, hold: int = 5,
                         params: SimParams = SimParams(),
                         path=None, excitation=None) -> List[LogRow]:
    """Excite one robot with uniform random wheel commands held for `hold`
    control steps and log, per step, the issued command alongside the
    desired and the wheel-odometry observed body twist.

    The logged command is the one the agent issued, before the plant
    distorts it; the observed twist is what the distorted command actually
    produced. That pairing is exactly what the inverse model trains on.

    excitation, when given, overrides the built-in schedule: it is called as
    excitation(step, rng) every control step and must return a WheelCommand.
    """
    if hold < 1:
        raise ValueError("hold must be at least 1")
    ss = np.random.SeedSequence(seed)
    ss_cmd, ss_noise = ss.spawn(2)
    rng = np.random.default_rng(ss_cmd)
    config = EpisodeConfig(max_duration=duration, n_per_team=1, n_opponents=0,
                           end_on_goal=False, reset_mode=ResetMode.KICKOFF, seed=seed)
    env = SoccerEnv(config, params, action_mode=ActionMode.WHEEL,
                    command_filter=plant.make_filter(ss_noise))
    env.reset()

    v_scale = params.robot.v_max / 100.0
    rows: List[LogRow] = []
    cmd = WheelCommand(0.0, 0.0)
    for step in range(config.max_frames):
        if excitation is not None:
            cmd = excitation(step, rng)
        elif step % hold == 0:
            left, right = rng.uniform(-100.0, 100.0, 2)
            cmd = WheelCommand(float(left), float(right))
        result = env.step([cmd])
        v_d, w_d = result.info["desired"][0]
        v_obs, w_obs = result.info["observed"][0]
        rows.append(LogRow(t=result.info["world"].elapsed,
                           v_d=v_d, w_d=w_d, v_obs=v_obs, w_obs=w_obs,
                           vl_cmd=cmd.left * v_scale, vr_cmd=cmd.right * v_scale))
        if result.done:
            break
    if path is not None:
        write_log(rows, path)
    return rows
