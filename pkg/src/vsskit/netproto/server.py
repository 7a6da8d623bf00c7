"""UDP simulation server: state fan-out and command intake.

One select loop owns the world; nothing else mutates it. Clients subscribe
by sending any datagram to the state port and then receive every broadcast.
Commands arrive on the command port; the latest command per robot wins
within a control step. In lock-step mode the world advances only once a
command has arrived for every controlled robot, which makes the wire path
bit-reproducible against in-process stepping.
"""

from __future__ import annotations

import heapq
import math
import select
import socket
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from ..action import DiscreteAction, HighLevelAction, VirtualTarget, \
    continuous_to_wheels, discrete_step_pipeline
from ..env import ActionMode, SoccerEnv
from ..physics import WheelCommand
from .channel import ChannelModel, channel_transmit
from .packets import (
    DISCRETE_MODE,
    TWIST_MODE,
    WHEEL_MODE,
    PacketError,
    RobotCommand,
    decode_command,
    encode_state,
)


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    state_port: int = 9001
    command_port: int = 9002
    rate_hz: float = 30.0
    lockstep: bool = False
    # pace free-run steps to rate_hz wall time; ignored in lock-step
    realtime: bool = True
    # blue robot ids accepting wire commands; None means all of them
    controlled: Optional[Tuple[int, ...]] = None
    channel: Optional[ChannelModel] = None
    max_steps: Optional[int] = None
    max_wall: Optional[float] = None

    def __post_init__(self):
        if self.rate_hz <= 0.0:
            raise ValueError("rate_hz must be positive")
        if self.state_port == self.command_port and self.state_port != 0:
            raise ValueError("state and command ports must differ")


class SimServer:
    """The environment must be in wheel action mode; per-robot wire modes
    are translated here (high-level and discrete commands included)."""

    def __init__(self, env: SoccerEnv, config: ServerConfig = ServerConfig()):
        if env.action_mode is not ActionMode.WHEEL:
            raise ValueError("server drives the environment with wheel commands")
        self.env = env
        self.config = config
        self.stats: Dict[str, int] = {
            "datagrams": 0, "bad_packets": 0, "foreign_team": 0,
            "unknown_robot": 0, "bad_discrete": 0, "steps": 0,
            "broadcasts": 0, "episodes": 0, "dropped": 0,
        }
        self._state_sock: Optional[socket.socket] = None
        self._cmd_sock: Optional[socket.socket] = None
        self._subs: Set[Tuple[str, int]] = set()
        self._pending: Dict[int, RobotCommand] = {}
        self._targets: Dict[int, VirtualTarget] = {}
        # (due, tie-break, payload, addr or None for inbound commands)
        self._due: List[Tuple[float, int, bytes, Optional[Tuple[str, int]]]] = []
        self._due_seq = 0
        self._running = False

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        cfg = self.config
        self._state_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._cmd_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._state_sock.bind((cfg.host, cfg.state_port))
        self._cmd_sock.bind((cfg.host, cfg.command_port))
        self._state_sock.setblocking(False)
        self._cmd_sock.setblocking(False)
        if self.env.world is None:
            self.env.reset()

    @property
    def state_port(self) -> int:
        return self._state_sock.getsockname()[1]

    @property
    def command_port(self) -> int:
        return self._cmd_sock.getsockname()[1]

    def close(self) -> None:
        self._running = False
        for sock in (self._state_sock, self._cmd_sock):
            if sock is not None:
                sock.close()
        self._state_sock = self._cmd_sock = None

    # -- command handling ----------------------------------------------------

    def controlled_ids(self) -> Tuple[int, ...]:
        if self.config.controlled is not None:
            return self.config.controlled
        return tuple(r.id for r in self.env.world.robots_blue)

    def handle_command_datagram(self, data: bytes) -> None:
        """Validate and stage one command datagram (fuzz entry point)."""
        self.stats["datagrams"] += 1
        try:
            packet = decode_command(data)
        except PacketError:
            self.stats["bad_packets"] += 1
            return
        if packet.team != 0:
            # only the blue side is wire-controlled; decoded, not applied
            self.stats["foreign_team"] += 1
            return
        known = set(self.controlled_ids())
        for cmd in packet.commands:
            if cmd.id not in known:
                self.stats["unknown_robot"] += 1
                continue
            self._pending[cmd.id] = cmd

    def _to_wheels(self, cmd: Optional[RobotCommand], robot) -> WheelCommand:
        if cmd is None:
            return WheelCommand(0.0, 0.0)
        p1 = cmd.p1 if math.isfinite(cmd.p1) else 0.0
        p2 = cmd.p2 if math.isfinite(cmd.p2) else 0.0
        if cmd.mode == WHEEL_MODE:
            return WheelCommand(p1, p2)
        if cmd.mode == TWIST_MODE:
            action = HighLevelAction(p1, p2).clamped(self.env.action_config)
            return continuous_to_wheels(action, self.env.params.robot.axle_length,
                                        self.env.action_config.v_max)
        index = int(p1)
        if not 1 <= index <= 5:
            self.stats["bad_discrete"] += 1
            index = DiscreteAction.KEEP.value
        target = self._targets.get(cmd.id, VirtualTarget(0.0, 0.0))
        wheels, self._targets[cmd.id] = discrete_step_pipeline(
            robot.pose, target, DiscreteAction(index),
            self.env.params.robot.axle_length, self.env.action_config)
        return wheels

    # -- stepping and broadcast ----------------------------------------------

    def step_world(self) -> None:
        env = self.env
        actions = [self._to_wheels(self._pending.get(r.id), r)
                   for r in env.world.robots_blue]
        env.step(actions)
        self.stats["steps"] += 1
        if env.done:
            env.reset()
            self._targets.clear()
            self.stats["episodes"] += 1
        if self.config.lockstep:
            self._pending.clear()

    def _send_state(self, now: float) -> None:
        data = encode_state(self.env.world, self.env.config.max_frames)
        for addr in list(self._subs):
            self._dispatch(data, addr, now)
        self.stats["broadcasts"] += 1

    def _dispatch(self, data: bytes, addr: Optional[Tuple[str, int]],
                  now: float) -> None:
        """Send or stage one packet; addr None means an inbound command."""
        if self.config.channel is None:
            self._deliver(data, addr)
            return
        schedule = channel_transmit(self.config.channel, data, now)
        if not schedule:
            self.stats["dropped"] += 1
            return
        for due, payload in schedule:
            self._due_seq += 1
            heapq.heappush(self._due, (due, self._due_seq, payload, addr))

    def _deliver(self, data: bytes, addr: Optional[Tuple[str, int]]) -> None:
        if addr is None:
            self.handle_command_datagram(data)
            return
        try:
            self._state_sock.sendto(data, addr)
        except OSError:
            self._subs.discard(addr)

    def _flush_due(self, now: float) -> None:
        while self._due and self._due[0][0] <= now:
            _, _, payload, addr = heapq.heappop(self._due)
            self._deliver(payload, addr)

    # -- main loop -----------------------------------------------------------

    def run(self) -> None:
        if self._state_sock is None:
            self.start()
        cfg = self.config
        period = 1.0 / cfg.rate_hz
        started = time.monotonic()
        next_tick = started + period
        self._running = True
        try:
            while self._running:
                now = time.monotonic()
                if cfg.max_wall is not None and now - started >= cfg.max_wall:
                    break
                if cfg.max_steps is not None and self.stats["steps"] >= cfg.max_steps:
                    break
                timeout = 0.05
                if not cfg.lockstep and cfg.realtime:
                    timeout = max(0.0, min(timeout, next_tick - now))
                elif not cfg.lockstep:
                    timeout = 0.0
                readable, _, _ = select.select(
                    [self._state_sock, self._cmd_sock], [], [], timeout)
                now = time.monotonic()
                for sock in readable:
                    self._drain(sock, now)
                self._flush_due(now)
                if cfg.lockstep:
                    need = set(self.controlled_ids())
                    if need and need.issubset(self._pending):
                        self.step_world()
                        self._send_state(time.monotonic())
                elif not cfg.realtime or now >= next_tick:
                    self.step_world()
                    self._send_state(time.monotonic())
                    next_tick += period
                    if next_tick < now:
                        next_tick = now + period
        finally:
            self._running = False

    def _drain(self, sock: socket.socket, now: float) -> None:
        while True:
            try:
                data, addr = sock.recvfrom(65535)
            except BlockingIOError:
                return
            except OSError:
                return
            if sock is self._state_sock:
                # any datagram on the state port is a subscription
                if addr not in self._subs:
                    self._subs.add(addr)
                self._dispatch(encode_state(self.env.world,
                                            self.env.config.max_frames),
                               addr, now)
            else:
                if self.config.channel is None:
                    self.handle_command_datagram(data)
                else:
                    self._dispatch(data, None, now)


def serve(env: SoccerEnv, config: ServerConfig = ServerConfig()) -> SimServer:
    """Blocking convenience wrapper: start, run until a stop condition."""
    server = SimServer(env, config)
    server.start()
    try:
        server.run()
    finally:
        server.close()
    return server
