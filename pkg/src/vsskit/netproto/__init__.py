"""Binary UDP protocol: state broadcast, command intake, lossy channel."""

from .channel import ChannelModel, channel_transmit
from .packets import (
    COMMAND_TYPE,
    MAGIC,
    STATE_TYPE,
    VERSION,
    BadMagic,
    BadMode,
    BadType,
    BadVersion,
    CommandPacket,
    PacketError,
    RobotCommand,
    RobotField,
    StatePacket,
    Truncated,
    decode_command,
    decode_state,
    encode_command,
    encode_state,
    state_packet_length,
    world_from_state,
)
from .server import ServerConfig, SimServer, serve

__all__ = [
    "COMMAND_TYPE",
    "MAGIC",
    "STATE_TYPE",
    "VERSION",
    "BadMagic",
    "BadMode",
    "BadType",
    "BadVersion",
    "ChannelModel",
    "CommandPacket",
    "PacketError",
    "RobotCommand",
    "RobotField",
    "ServerConfig",
    "SimServer",
    "StatePacket",
    "Truncated",
    "channel_transmit",
    "decode_command",
    "decode_state",
    "encode_command",
    "encode_state",
    "serve",
    "state_packet_length",
    "world_from_state",
]
