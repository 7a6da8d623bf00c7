"""Remote-agent SDK for the simulator's UDP wire protocol.

Decodes state datagrams, encodes command datagrams, rebuilds the
simulator's normalized observation layout from raw wire values, and wraps
the request/response loop in a small Gym-style handle. Depends only on
numpy; the simulator itself is reached exclusively over the wire.
"""

from .agents import chase_wheels, wheels_from_twist
from .observation import (
    V_SCALE,
    W_SCALE,
    X_SCALE,
    Y_SCALE,
    observation_from_state,
    observation_length,
)
from .remote_env import (
    RemoteEnvConfig,
    RemoteEnvHandle,
    connect,
    remote_step,
)
from .wire import (
    COMMAND_TYPE,
    DISCRETE_MODE,
    MAGIC,
    STATE_TYPE,
    TWIST_MODE,
    VERSION,
    WHEEL_MODE,
    BadMagic,
    BadMode,
    BadPacketType,
    CommandEntry,
    RobotView,
    StateView,
    Truncated,
    VersionMismatch,
    WireError,
    decode_state,
    encode_command,
    state_packet_length,
)

__version__ = "0.1.0"

__all__ = [
    "BadMagic",
    "BadMode",
    "BadPacketType",
    "COMMAND_TYPE",
    "CommandEntry",
    "DISCRETE_MODE",
    "MAGIC",
    "RemoteEnvConfig",
    "RemoteEnvHandle",
    "RobotView",
    "STATE_TYPE",
    "StateView",
    "TWIST_MODE",
    "Truncated",
    "V_SCALE",
    "VERSION",
    "VersionMismatch",
    "W_SCALE",
    "WHEEL_MODE",
    "WireError",
    "X_SCALE",
    "Y_SCALE",
    "chase_wheels",
    "connect",
    "decode_state",
    "encode_command",
    "observation_from_state",
    "observation_length",
    "remote_step",
    "state_packet_length",
    "wheels_from_twist",
]
