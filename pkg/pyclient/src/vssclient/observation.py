"""Rebuild the simulator's normalized observation vector from wire values.

The wire stays in raw units (cm, cm/s, rad) so clients in any language can
apply their own scaling; this module reproduces the layout the simulator's
own environment feeds to learning code:

    [ball x, y, vx, vy]
    ++ per robot [x, y, sin theta, cos theta, vx, vy, omega]
       (blue ascending id, then yellow)
    ++ [episode fraction]

Positions divide by the arena half-extents, velocities by the wheel speed
cap, angular rate by the spin cap. The scales are fixed constants of the
wire contract, not tunables. The final element is the packet's timestamp
field, which carries exactly this fraction quantized to f32, so the client
needs no knowledge of the server's episode length.
"""

from __future__ import annotations

import math
from typing import List

import numpy as np

from .wire import StateView

X_SCALE = 85.0   # arena half-length to the back wall, cm
Y_SCALE = 65.0   # arena half-width, cm
V_SCALE = 150.0  # wheel speed cap, cm/s
W_SCALE = 40.0   # angular rate cap, rad/s


def observation_length(n_robots: int) -> int:
    return 4 + 7 * n_robots + 1


def observation_from_state(state: StateView) -> np.ndarray:
    """Normalized float64 observation for a decoded state datagram.

    Matches the simulator's native observation for the same world snapshot
    to 32-bit precision (wire floats are exact in float64, and the
    arithmetic is the same)."""
    bx, by, bvx, bvy = state.ball
    out: List[float] = [bx / X_SCALE, by / Y_SCALE, bvx / V_SCALE, bvy / V_SCALE]
    for robot in state.robots_blue + state.robots_yellow:
        out.extend([
            robot.x / X_SCALE,
            robot.y / Y_SCALE,
            math.sin(robot.theta),
            math.cos(robot.theta),
            robot.vx / V_SCALE,
            robot.vy / V_SCALE,
            robot.omega / W_SCALE,
        ])
    out.append(state.timestamp)
    return np.asarray(out, dtype=np.float64)
