"""Gym-style environment interface over a live UDP simulation server.

Subscribing is implicit in the protocol: the server registers whichever
address sends any datagram to its state port and broadcasts snapshots to it
from then on. A handle therefore needs just one socket; commands go to the
command port from the same socket and replies arrive on it.

Concurrency model: single-threaded request/response per handle, one handle
per process. In lock-step mode the server advances one control step per
received command packet, so ``remote_step`` is an exact transaction; in
free-run mode it simply returns the next broadcast after the send.

The step result carries a heuristic done flag instead of a dedicated wire
field: the episode ended if the frame counter went backwards (the server
reset and started over) or the timestamp fraction reached 1 (episode
exhausted). Servers configured to re-spot after goals without resetting
keep their frame counter monotone, so goals alone do not trip the flag.
"""

from __future__ import annotations

import socket
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .observation import observation_from_state
from .wire import CommandEntry, StateView, WHEEL_MODE, decode_state, encode_command

DEFAULT_STATE_PORT = 9001
DEFAULT_COMMAND_PORT = 9002
_MAX_DATAGRAM = 65536

WheelPair = Tuple[float, float]
Action = Union[WheelPair, CommandEntry]


@dataclass(frozen=True)
class RemoteEnvConfig:
    """Where the server lives and which robots this client drives.

    ``controlled`` lists robot ids on ``team`` that receive one action per
    ``remote_step`` call, in order. ``timeout`` bounds every wait for a
    state datagram."""

    host: str = "127.0.0.1"
    state_port: int = DEFAULT_STATE_PORT
    command_port: int = DEFAULT_COMMAND_PORT
    team: int = 0
    controlled: Tuple[int, ...] = (0,)
    lockstep: bool = True
    timeout: float = 2.0

    def __post_init__(self):
        if self.state_port == self.command_port:
            raise ValueError("state and command ports must differ")
        for port in (self.state_port, self.command_port):
            if not 1 <= port <= 65535:
                raise ValueError(f"port {port} outside 1..65535")
        if not self.timeout > 0.0:
            raise ValueError("timeout must be positive")
        if self.team not in (0, 1):
            raise ValueError(f"team must be 0 or 1, got {self.team}")
        if len(self.controlled) == 0:
            raise ValueError("need at least one controlled robot id")
        if len(set(self.controlled)) != len(self.controlled):
            raise ValueError("controlled robot ids must be unique")
        for rid in self.controlled:
            if not 0 <= rid <= 255:
                raise ValueError(f"robot id {rid} outside u8")


class RemoteEnvHandle:
    """Live connection plus the most recent decoded state and observation."""

    def __init__(self, config: RemoteEnvConfig, sock: socket.socket,
                 state: StateView):
        self.config = config
        self.sock = sock
        self.state = state
        self.observation = observation_from_state(state)
        self._last_frame = state.frame

    @property
    def state_port(self) -> int:
        return self.config.state_port

    @property
    def command_port(self) -> int:
        return self.config.command_port

    @property
    def team(self) -> int:
        return self.config.team

    @property
    def controlled(self) -> Tuple[int, ...]:
        return self.config.controlled

    @property
    def lockstep(self) -> bool:
        return self.config.lockstep

    @property
    def timeout(self) -> float:
        return self.config.timeout

    def close(self) -> None:
        self.sock.close()

    def __enter__(self) -> "RemoteEnvHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def connect(config: RemoteEnvConfig = RemoteEnvConfig()) -> RemoteEnvHandle:
    """Subscribe to a running server and wait for the first state.

    Raises TimeoutError when no datagram arrives within ``config.timeout``
    and a WireError subclass (VersionMismatch in particular) when one
    arrives but is not a version-1 state packet."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    sock.settimeout(config.timeout)
    try:
        sock.sendto(b"\x00", (config.host, config.state_port))
        try:
            data, _ = sock.recvfrom(_MAX_DATAGRAM)
        except socket.timeout:
            raise TimeoutError(
                f"no state from {config.host}:{config.state_port} "
                f"within {config.timeout:g} s") from None
        state = decode_state(data)
    except BaseException:
        sock.close()
        raise
    return RemoteEnvHandle(config, sock, state)


def remote_step(handle: RemoteEnvHandle, actions: Sequence[Action],
                ) -> Tuple[np.ndarray, bool, StateView]:
    """Send one action per controlled robot, wait for the next state.

    Plain ``(left, right)`` pairs become wheel-mode commands for the
    configured ids; pass CommandEntry objects directly for other modes.
    Returns ``(observation, done, state)`` with the heuristic done flag
    described in the module docstring."""
    cfg = handle.config
    if len(actions) != len(cfg.controlled):
        raise ValueError(f"expected {len(cfg.controlled)} actions, "
                         f"got {len(actions)}")
    entries = []
    for rid, action in zip(cfg.controlled, actions):
        if isinstance(action, CommandEntry):
            entries.append(action)
        else:
            left, right = action
            entries.append(CommandEntry(rid, WHEEL_MODE, float(left), float(right)))
    handle.sock.sendto(encode_command(cfg.team, entries),
                       (cfg.host, cfg.command_port))
    try:
        data, _ = handle.sock.recvfrom(_MAX_DATAGRAM)
    except socket.timeout:
        raise TimeoutError(
            f"no state from {cfg.host}:{cfg.state_port} "
            f"within {cfg.timeout:g} s") from None
    state = decode_state(data)
    done = state.frame < handle._last_frame or state.timestamp >= 1.0
    handle._last_frame = state.frame
    handle.state = state
    handle.observation = observation_from_state(state)
    return handle.observation, done, state
