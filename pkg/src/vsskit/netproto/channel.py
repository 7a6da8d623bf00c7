"""Lossy-channel model for the wire path.

Sensing (state) packets suffer a Gaussian latency floored at zero; command
packets a small constant delay; either direction can drop a packet. The
model is seeded and consumed packet by packet, so a transcript of sends
replays identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .packets import COMMAND_TYPE, STATE_TYPE


@dataclass
class ChannelModel:
    sensing_delay_mean: float = 0.090
    sensing_delay_sd: float = 0.010
    command_delay: float = 300e-6
    loss_probability: float = 0.0008
    seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ValueError("loss probability must lie in [0, 1]")
        if (self.sensing_delay_mean < 0.0 or self.sensing_delay_sd < 0.0
                or self.command_delay < 0.0):
            raise ValueError("delays must be non-negative")
        self.rng = np.random.default_rng(self.seed)


def channel_transmit(channel: ChannelModel, packet: bytes,
                     now: float) -> List[Tuple[float, bytes]]:
    """Delivery schedule for one packet: empty when dropped, otherwise a
    single (due time, payload) entry. The packet's type byte selects the
    delay law; unknown types get the command delay."""
    if channel.rng.random() < channel.loss_probability:
        return []
    kind = packet[5] if len(packet) > 5 else COMMAND_TYPE
    if kind == STATE_TYPE:
        delay = max(0.0, channel.rng.normal(channel.sensing_delay_mean,
                                            channel.sensing_delay_sd))
    else:
        delay = channel.command_delay
    return [(now + delay, packet)]
