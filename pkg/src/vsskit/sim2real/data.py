"""Trajectory logs and training datasets for the inverse-dynamics adaptor.

The on-disk log is a UTF-8 CSV, one row per control step:

    t,v_d,w_d,v_obs,w_obs,vl_cmd,vr_cmd

where (v_d, w_d) is the twist the agent asked for, (v_obs, w_obs) the twist
the plant measurably produced (wheel odometry), and (vl_cmd, vr_cmd) the
commanded wheel surface speeds in cm/s. Floats are written with repr() so a
re-read reproduces the exact binary values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

LOG_HEADER = "t,v_d,w_d,v_obs,w_obs,vl_cmd,vr_cmd"


@dataclass(frozen=True)
class LogRow:
    t: float
    v_d: float
    w_d: float
    v_obs: float
    w_obs: float
    vl_cmd: float
    vr_cmd: float


def write_log(rows: Sequence[LogRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(LOG_HEADER + "\n")
        for r in rows:
            fh.write(",".join(repr(v) for v in
                              (r.t, r.v_d, r.w_d, r.v_obs, r.w_obs,
                               r.vl_cmd, r.vr_cmd)) + "\n")


def read_log(path) -> List[LogRow]:
    try:
        return _read_log(path)
    except UnicodeDecodeError as exc:
        raise ValueError(f"{path}: not a text log ({exc})") from exc


def _read_log(path) -> List[LogRow]:
    rows: List[LogRow] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != LOG_HEADER:
            raise ValueError(f"{path}: bad or missing header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise ValueError(f"{path}:{lineno}: expected 7 fields, got {len(parts)}")
            try:
                vals = [float(p) for p in parts]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from exc
            if not all(math.isfinite(v) for v in vals):
                raise ValueError(f"{path}:{lineno}: non-finite value")
            rows.append(LogRow(*vals))
    return rows


@dataclass(frozen=True)
class TrajectorySample:
    """One supervised pair: input [v_d, w_d, v_obs_prev, w_obs_prev],
    target wheel speeds [V_l, V_r] in cm/s."""

    input: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        inp = np.asarray(self.input, dtype=np.float64)
        tgt = np.asarray(self.target, dtype=np.float64)
        if inp.shape != (4,) or tgt.shape != (2,):
            raise ValueError("sample must be a 4-vector input and 2-vector target")
        if not (np.all(np.isfinite(inp)) and np.all(np.isfinite(tgt))):
            raise ValueError("sample contains non-finite values")
        object.__setattr__(self, "input", inp)
        object.__setattr__(self, "target", tgt)

    def validate(self, v_max: float = 150.0) -> None:
        if np.any(np.abs(self.target) > v_max + 1e-9):
            raise ValueError(f"target wheel speed exceeds {v_max} cm/s")


def samples_from_log(rows: Sequence[LogRow], dt: float = 1.0 / 30.0,
                     use_prev_commands: bool = False) -> List[TrajectorySample]:
    """Pair each row with its predecessor's observed twist.

    The achieved twist stands in for the desired one: whatever the plant did
    is, in hindsight, a twist someone could have asked for, and the issued
    command is the label that achieves it. Pairs are built only across
    consecutive control steps (gap == dt), so concatenated logs are safe.

    use_prev_commands replaces the previous observed twist with the previous
    wheel commands in the context slots (an alternative conditioning choice;
    the default follows the observed-speeds convention).
    """
    out: List[TrajectorySample] = []
    for prev, cur in zip(rows, rows[1:]):
        if abs((cur.t - prev.t) - dt) > 1e-6:
            continue
        context = ((prev.vl_cmd, prev.vr_cmd) if use_prev_commands
                   else (prev.v_obs, prev.w_obs))
        out.append(TrajectorySample(
            input=np.array([cur.v_obs, cur.w_obs, context[0], context[1]]),
            target=np.array([cur.vl_cmd, cur.vr_cmd]),
        ))
    return out


def make_identity_dataset(n: int, axle_length: float = 7.5,
                          v_max: float = 150.0, seed: int = 0,
                          ) -> List[TrajectorySample]:
    """Synthetic dataset for the unperturbed plant: targets are the exact
    inverse kinematics of the desired twist. The previous-observation slots
    are filled with an independent twist draw so the network has to learn
    they carry no information here."""
    rng = np.random.default_rng(seed)
    vl = rng.uniform(-v_max, v_max, n)
    vr = rng.uniform(-v_max, v_max, n)
    pl = rng.uniform(-v_max, v_max, n)
    pr = rng.uniform(-v_max, v_max, n)
    v = 0.5 * (vl + vr)
    w = (vr - vl) / axle_length
    pv = 0.5 * (pl + pr)
    pw = (pr - pl) / axle_length
    return [TrajectorySample(input=np.array([v[i], w[i], pv[i], pw[i]]),
                             target=np.array([vl[i], vr[i]]))
            for i in range(n)]


def dataset_arrays(dataset: Sequence[TrajectorySample]) -> Tuple[np.ndarray, np.ndarray]:
    if not dataset:
        raise ValueError("dataset is empty")
    X = np.stack([s.input for s in dataset])
    Y = np.stack([s.target for s in dataset])
    return X, Y
