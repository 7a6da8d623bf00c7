"""Datagram codecs for the state/command wire format.

All numeric fields are little-endian. Floats travel as IEEE-754 32-bit, so
a decode(encode(x)) round trip quantizes to float32 precision exactly once.

StatePacket layout (38 + 25 per robot bytes):

    offset  size  field
    0       4     magic `VSRL`
    4       1     version = 1
    5       1     type = 0x01
    6       4     frame, u32
    10      4     timestamp in [0,1], f32 (fraction of the episode)
    14      4     elapsed seconds, f32
    18      1     own score, s8
    19      1     adversary score, s8
    20      16    ball x, y, vx, vy, 4 x f32
    36      1     count_blue, u8
    37      1     count_yellow, u8
    38      25/robot  id u8 + x, y, theta, vx, vy, omega as 6 x f32
                  (blue ascending id, then yellow)

CommandPacket layout (8 + 10 per robot bytes):

    0       4     magic `VSRL`
    4       1     version = 1
    5       1     type = 0x02
    6       1     team (0 blue, 1 yellow)
    7       1     count, u8
    8       10/robot  id u8 + mode u8 + two f32 payload values

Command modes: 0 = per-wheel channel values, 1 = high-level (v, omega),
2 = discrete action whose index 1..5 is the first payload's integer part.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from ..physics import BallState, Pose2D, RobotState, Team, Twist2D, WorldState

MAGIC = b"VSRL"
VERSION = 1
STATE_TYPE = 0x01
COMMAND_TYPE = 0x02

_STATE_HEAD = struct.Struct("<4sBBIffbb4fBB")
_ROBOT_BLOCK = struct.Struct("<B6f")
_CMD_HEAD = struct.Struct("<4sBBBB")
_CMD_BLOCK = struct.Struct("<BB2f")

WHEEL_MODE = 0
TWIST_MODE = 1
DISCRETE_MODE = 2
_MODES = (WHEEL_MODE, TWIST_MODE, DISCRETE_MODE)


class PacketError(ValueError):
    """Base for all wire-format violations; never anything else on decode."""


class BadMagic(PacketError):
    pass


class BadVersion(PacketError):
    pass


class BadType(PacketError):
    pass


class Truncated(PacketError):
    """Length does not match the layout (short or trailing bytes)."""


class BadMode(PacketError):
    pass


@dataclass(frozen=True)
class RobotField:
    id: int
    x: float
    y: float
    theta: float
    vx: float
    vy: float
    omega: float


@dataclass(frozen=True)
class StatePacket:
    frame: int
    timestamp: float
    elapsed: float
    score_own: int
    score_adv: int
    ball: Tuple[float, float, float, float]
    robots_blue: Tuple[RobotField, ...]
    robots_yellow: Tuple[RobotField, ...]


@dataclass(frozen=True)
class RobotCommand:
    id: int
    mode: int
    p1: float
    p2: float


@dataclass(frozen=True)
class CommandPacket:
    team: int
    commands: Tuple[RobotCommand, ...]


def state_packet_length(n_robots: int) -> int:
    return _STATE_HEAD.size + _ROBOT_BLOCK.size * n_robots


def _wire_angle(theta: float) -> float:
    """f32-canonical heading: rounding a wrapped f64 angle to f32 can land
    one ulp above pi, which a receiver would wrap to the negative side and
    then re-encode differently. Pushing that single boundary case down here
    makes encoding idempotent across decode/encode round trips."""
    as_f32 = struct.unpack("<f", struct.pack("<f", theta))[0]
    if as_f32 > math.pi:
        return as_f32 - 2.0 * math.pi
    return theta


def encode_state(world: WorldState, max_frames: int = 9000) -> bytes:
    """Serialize a world snapshot. timestamp = frame / max_frames capped at
    1, elapsed in raw seconds; both quantize to f32 on the wire."""
    robots = list(world.robots_blue) + list(world.robots_yellow)
    if len(world.robots_blue) > 255 or len(world.robots_yellow) > 255:
        raise ValueError("robot count exceeds a u8")
    timestamp = min(1.0, world.frame / max_frames)
    head = _STATE_HEAD.pack(
        MAGIC, VERSION, STATE_TYPE, world.frame, timestamp, world.elapsed,
        world.score_own, world.score_adv,
        world.ball.x, world.ball.y, world.ball.vx, world.ball.vy,
        len(world.robots_blue), len(world.robots_yellow))
    blocks = [head]
    for r in robots:
        blocks.append(_ROBOT_BLOCK.pack(r.id, r.pose.x, r.pose.y,
                                        _wire_angle(r.pose.theta),
                                        r.twist.vx, r.twist.vy, r.twist.omega))
    return b"".join(blocks)


def _check_envelope(data: bytes, expected_type: int) -> None:
    if len(data) < 6:
        raise Truncated(f"{len(data)} bytes is shorter than any packet")
    if data[:4] != MAGIC:
        raise BadMagic(f"magic {data[:4]!r}")
    if data[4] != VERSION:
        raise BadVersion(f"version {data[4]}")
    if data[5] != expected_type:
        raise BadType(f"type 0x{data[5]:02x}")


def decode_state(data: bytes) -> StatePacket:
    _check_envelope(data, STATE_TYPE)
    if len(data) < _STATE_HEAD.size:
        raise Truncated(f"state header needs {_STATE_HEAD.size} bytes, got {len(data)}")
    (_, _, _, frame, timestamp, elapsed, score_own, score_adv,
     bx, by, bvx, bvy, n_blue, n_yellow) = _STATE_HEAD.unpack_from(data)
    expected = state_packet_length(n_blue + n_yellow)
    if len(data) != expected:
        raise Truncated(f"expected {expected} bytes for {n_blue}+{n_yellow} "
                        f"robots, got {len(data)}")
    robots: List[RobotField] = []
    off = _STATE_HEAD.size
    for _ in range(n_blue + n_yellow):
        rid, x, y, theta, vx, vy, omega = _ROBOT_BLOCK.unpack_from(data, off)
        robots.append(RobotField(rid, x, y, theta, vx, vy, omega))
        off += _ROBOT_BLOCK.size
    return StatePacket(frame=frame, timestamp=timestamp, elapsed=elapsed,
                       score_own=score_own, score_adv=score_adv,
                       ball=(bx, by, bvx, bvy),
                       robots_blue=tuple(robots[:n_blue]),
                       robots_yellow=tuple(robots[n_blue:]))


def encode_command(team: Union[int, Team],
                   commands: Sequence[Union[RobotCommand, Tuple[int, int, float, float]]],
                   ) -> bytes:
    if isinstance(team, Team):
        team = 0 if team is Team.BLUE else 1
    if team not in (0, 1):
        raise ValueError(f"team byte must be 0 or 1, got {team}")
    if len(commands) > 255:
        raise ValueError("too many robot commands for a u8 count")
    blocks = [_CMD_HEAD.pack(MAGIC, VERSION, COMMAND_TYPE, team, len(commands))]
    for c in commands:
        if not isinstance(c, RobotCommand):
            c = RobotCommand(*c)
        if c.mode not in _MODES:
            raise BadMode(f"mode {c.mode}")
        if not 0 <= c.id <= 255:
            raise ValueError(f"robot id {c.id} outside u8")
        blocks.append(_CMD_BLOCK.pack(c.id, c.mode, c.p1, c.p2))
    return b"".join(blocks)


def decode_command(data: bytes) -> CommandPacket:
    _check_envelope(data, COMMAND_TYPE)
    if len(data) < _CMD_HEAD.size:
        raise Truncated(f"command header needs {_CMD_HEAD.size} bytes, got {len(data)}")
    _, _, _, team, count = _CMD_HEAD.unpack_from(data)
    if team not in (0, 1):
        raise PacketError(f"team byte {team}")
    expected = _CMD_HEAD.size + _CMD_BLOCK.size * count
    if len(data) != expected:
        raise Truncated(f"expected {expected} bytes for {count} commands, "
                        f"got {len(data)}")
    commands: List[RobotCommand] = []
    off = _CMD_HEAD.size
    for _ in range(count):
        rid, mode, p1, p2 = _CMD_BLOCK.unpack_from(data, off)
        if mode not in _MODES:
            raise BadMode(f"mode {mode}")
        commands.append(RobotCommand(rid, mode, p1, p2))
        off += _CMD_BLOCK.size
    return CommandPacket(team=team, commands=tuple(commands))


def world_from_state(packet: StatePacket, ball_radius: float = 2.135) -> WorldState:
    """Rebuild a stepping-free world snapshot from wire values.

    Wheel speeds are not on the wire, so they come back zero; poses, twists,
    ball, clock and score are faithful at f32 precision. Good enough for any
    policy that plans from poses, which is all of them here.
    """

    def robots(fields: Tuple[RobotField, ...], team: Team) -> List[RobotState]:
        return [RobotState(id=f.id, team=team,
                           pose=Pose2D(f.x, f.y, f.theta),
                           twist=Twist2D(f.vx, f.vy, f.omega))
                for f in fields]

    bx, by, bvx, bvy = packet.ball
    return WorldState(
        robots_blue=robots(packet.robots_blue, Team.BLUE),
        robots_yellow=robots(packet.robots_yellow, Team.YELLOW),
        ball=BallState(bx, by, bvx, bvy, radius=ball_radius),
        elapsed=packet.elapsed, score_own=packet.score_own,
        score_adv=packet.score_adv, frame=packet.frame)
