"""Standalone codecs for the simulator's UDP datagram formats.

This package deliberately does not import the simulator. Everything here is
written from the wire layout alone, so the module doubles as a reference for
clients in other languages. All numeric fields are little-endian; floats
travel as IEEE-754 32-bit.

State datagram, 38 + 25 bytes per robot, broadcast by the server:

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

Command datagram, 8 + 10 bytes per robot, sent to the server:

    0       4     magic `VSRL`
    4       1     version = 1
    5       1     type = 0x02
    6       1     team (0 blue, 1 yellow)
    7       1     count, u8
    8       10/robot  id u8 + mode u8 + two f32 payload values

Command modes: 0 = per-wheel channel values in [-100, 100], 1 = desired
(v, omega) twist, 2 = discrete action whose index 1..5 is the first
payload's integer part. Positions are cm, speeds cm/s, angles rad.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence, Tuple

MAGIC = b"VSRL"
VERSION = 1
STATE_TYPE = 0x01
COMMAND_TYPE = 0x02

WHEEL_MODE = 0
TWIST_MODE = 1
DISCRETE_MODE = 2
_MODES = (WHEEL_MODE, TWIST_MODE, DISCRETE_MODE)

_STATE_HEAD = struct.Struct("<4sBBIffbb4fBB")
_ROBOT_BLOCK = struct.Struct("<B6f")
_CMD_HEAD = struct.Struct("<4sBBBB")
_CMD_BLOCK = struct.Struct("<BB2f")


class WireError(ValueError):
    """Base for every wire-format violation raised by this module."""


class BadMagic(WireError):
    pass


class VersionMismatch(WireError):
    """Packet speaks a protocol version this client does not."""


class BadPacketType(WireError):
    pass


class Truncated(WireError):
    """Length does not match the layout (short or trailing bytes)."""


class BadMode(WireError):
    pass


@dataclass(frozen=True)
class RobotView:
    """One robot as reported on the wire: pose and ground-frame twist."""

    id: int
    x: float
    y: float
    theta: float
    vx: float
    vy: float
    omega: float


@dataclass(frozen=True)
class StateView:
    """Decoded state datagram. ``ball`` is (x, y, vx, vy)."""

    frame: int
    timestamp: float
    elapsed: float
    score_own: int
    score_adv: int
    ball: Tuple[float, float, float, float]
    robots_blue: Tuple[RobotView, ...]
    robots_yellow: Tuple[RobotView, ...]


@dataclass(frozen=True)
class CommandEntry:
    """One robot command: wire mode plus its two payload values."""

    id: int
    mode: int
    p1: float
    p2: float


def state_packet_length(n_robots: int) -> int:
    return _STATE_HEAD.size + _ROBOT_BLOCK.size * n_robots


def _check_envelope(data: bytes, expected_type: int) -> None:
    if len(data) < 6:
        raise Truncated(f"{len(data)} bytes is shorter than any packet")
    if data[:4] != MAGIC:
        raise BadMagic(f"magic {data[:4]!r}")
    if data[4] != VERSION:
        raise VersionMismatch(f"version {data[4]}, this client speaks {VERSION}")
    if data[5] != expected_type:
        raise BadPacketType(f"type 0x{data[5]:02x}")


def decode_state(data: bytes) -> StateView:
    """Parse one state datagram; raises a WireError subclass on anything
    that is not a well-formed version-1 state packet."""
    _check_envelope(data, STATE_TYPE)
    if len(data) < _STATE_HEAD.size:
        raise Truncated(f"state header needs {_STATE_HEAD.size} bytes, "
                        f"got {len(data)}")
    (_, _, _, frame, timestamp, elapsed, score_own, score_adv,
     bx, by, bvx, bvy, n_blue, n_yellow) = _STATE_HEAD.unpack_from(data)
    expected = state_packet_length(n_blue + n_yellow)
    if len(data) != expected:
        raise Truncated(f"expected {expected} bytes for {n_blue}+{n_yellow} "
                        f"robots, got {len(data)}")
    robots = []
    off = _STATE_HEAD.size
    for _ in range(n_blue + n_yellow):
        robots.append(RobotView(*_ROBOT_BLOCK.unpack_from(data, off)))
        off += _ROBOT_BLOCK.size
    return StateView(frame=frame, timestamp=timestamp, elapsed=elapsed,
                     score_own=score_own, score_adv=score_adv,
                     ball=(bx, by, bvx, bvy),
                     robots_blue=tuple(robots[:n_blue]),
                     robots_yellow=tuple(robots[n_blue:]))


def encode_command(team: int, entries: Sequence[CommandEntry]) -> bytes:
    """Serialize commands for one team. Validation mirrors the server's
    decoder, so anything this accepts the server will parse."""
    if team not in (0, 1):
        raise ValueError(f"team byte must be 0 or 1, got {team}")
    if len(entries) > 255:
        raise ValueError("too many robot commands for a u8 count")
    head = _CMD_HEAD.pack(MAGIC, VERSION, COMMAND_TYPE, team, len(entries))
    blocks = [head]
    for entry in entries:
        if entry.mode not in _MODES:
            raise BadMode(f"mode {entry.mode}")
        if not 0 <= entry.id <= 255:
            raise ValueError(f"robot id {entry.id} outside u8")
        blocks.append(_CMD_BLOCK.pack(entry.id, entry.mode, entry.p1, entry.p2))
    return b"".join(blocks)
