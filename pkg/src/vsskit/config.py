"""Kit-wide configuration file: a flat, typed key-value format with sections.

Sections are ``physics``, ``env``, ``rewards``, ``action``, ``channel`` and
``training``. Every key maps onto a field of one of the parameter dataclasses;
unknown sections or keys are errors, so typos fail loudly instead of silently
falling back to defaults. ``render_config(load_config(p))`` round-trips.
"""

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Union

from .action import ActionConfig
from .env import ActionMode, EpisodeConfig, ResetMode
from .netproto import ChannelModel
from .physics import BallParams, FieldSpec, RobotSpec, SimParams
from .reward import RewardWeights
from .sim2real import PseudoRealPlant, TrainConfig

__all__ = [
    "ConfigError",
    "KitConfig",
    "load_config",
    "render_config",
]


class ConfigError(ValueError):
    """Malformed config file: unknown section/key or unparseable value."""


@dataclass(frozen=True)
class KitConfig:
    """Everything a run needs, bundled. ``channel`` only reaches the server
    when ``channel_enabled`` is set; the wire path is clean by default."""

    params: SimParams = SimParams()
    episode: EpisodeConfig = EpisodeConfig()
    weights: RewardWeights = RewardWeights()
    action_mode: ActionMode = ActionMode.WHEEL
    action: ActionConfig = ActionConfig()
    channel_enabled: bool = False
    channel: ChannelModel = ChannelModel()
    training: TrainConfig = TrainConfig()
    plant: PseudoRealPlant = PseudoRealPlant()
    use_prev_commands: bool = False


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"expected a finite number, got {text!r}")
    return value


def _opponents(text: str) -> Optional[int]:
    # "mirror" keeps the default behaviour (opponents = n_per_team)
    low = text.strip().lower()
    return None if low == "mirror" else int(text)


_Caster = Callable[[str], object]

_SCHEMA: Dict[str, Dict[str, _Caster]] = {
    "physics": {
        "field_play_half_length": _finite_float,
        "field_pocket_depth": _finite_float,
        "field_half_width": _finite_float,
        "field_goal_half_width": _finite_float,
        "field_normalization_length": _finite_float,
        "robot_body_radius": _finite_float,
        "robot_axle_length": _finite_float,
        "robot_wheel_radius": _finite_float,
        "robot_mass": _finite_float,
        "robot_v_max": _finite_float,
        "robot_motor_tau": _finite_float,
        "ball_radius": _finite_float,
        "ball_mass": _finite_float,
        "ball_friction_decel": _finite_float,
        "ball_wall_restitution": _finite_float,
        "ball_robot_restitution": _finite_float,
        "control_dt": _finite_float,
        "n_substeps": int,
    },
    "env": {
        "max_duration": _finite_float,
        "n_per_team": int,
        "n_opponents": _opponents,
        "end_on_goal": _bool,
        "reset_mode": ResetMode,
        "seed": int,
    },
    "rewards": {
        "w_g": _finite_float,
        "w_m": _finite_float,
        "w_p": _finite_float,
        "w_e": _finite_float,
    },
    "action": {
        "mode": ActionMode,
        "v_max": _finite_float,
        "omega_max": _finite_float,
        "k_theta": _finite_float,
        "k_v": _finite_float,
        "d_sat": _finite_float,
        "r_max": _finite_float,
    },
    "channel": {
        "enabled": _bool,
        "sensing_delay_mean": _finite_float,
        "sensing_delay_sd": _finite_float,
        "command_delay": _finite_float,
        "loss_probability": _finite_float,
        "seed": int,
    },
    "training": {
        "epochs": int,
        "batch_size": int,
        "learning_rate": _finite_float,
        "seed": int,
        "val_split": _finite_float,
        "use_prev_commands": _bool,
        "plant_gain_left": _finite_float,
        "plant_gain_right": _finite_float,
        "plant_dead_zone": _finite_float,
        "plant_latency_steps": int,
        "plant_noise_scale": _finite_float,
    },
}


def _strip_prefix(values: Dict[str, object], prefix: str) -> Dict[str, object]:
    return {k[len(prefix):]: v for k, v in values.items() if k.startswith(prefix)}


def load_config(path: Union[str, Path, None]) -> KitConfig:
    """Parse a config file into a KitConfig; ``None`` yields pure defaults.

    Raises ConfigError on unreadable files, unknown sections or keys, values
    that fail to parse, and values the parameter dataclasses reject.
    """
    if path is None:
        return KitConfig()
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, default_section="")
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    values: Dict[str, Dict[str, object]] = {s: {} for s in _SCHEMA}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        keys = _SCHEMA[section]
        for key, raw in parser.items(section):
            if key not in keys:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            try:
                values[section][key] = keys[key](raw)
            except ValueError as exc:
                raise ConfigError(
                    f"{path}: bad value for {key!r} in [{section}]: {exc}") from exc

    try:
        return _assemble(values)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _assemble(values: Dict[str, Dict[str, object]]) -> KitConfig:
    phys = values["physics"]
    params = SimParams(
        field=FieldSpec(**_strip_prefix(phys, "field_")),
        robot=RobotSpec(**_strip_prefix(phys, "robot_")),
        ball=BallParams(**_strip_prefix(phys, "ball_")),
        **{k: v for k, v in phys.items() if k in ("control_dt", "n_substeps")})
    episode = EpisodeConfig(control_dt=params.control_dt, **values["env"])
    weights = RewardWeights(**values["rewards"])
    act = dict(values["action"])
    action_mode = act.pop("mode", ActionMode.WHEEL)
    action = ActionConfig(**act)
    chan = dict(values["channel"])
    channel_enabled = chan.pop("enabled", False)
    channel = ChannelModel(**chan)
    train = dict(values["training"])
    use_prev = train.pop("use_prev_commands", False)
    plant = PseudoRealPlant(
        **{"gain_left": train.pop("plant_gain_left", 0.8),
           "gain_right": train.pop("plant_gain_right", 1.2),
           "dead_zone": train.pop("plant_dead_zone", 5.0),
           "latency_steps": train.pop("plant_latency_steps", 1),
           "noise_scale": train.pop("plant_noise_scale", 0.0)})
    training = TrainConfig(**train)
    return KitConfig(params=params, episode=episode, weights=weights,
                     action_mode=ActionMode(action_mode), action=action,
                     channel_enabled=bool(channel_enabled), channel=channel,
                     training=training, plant=plant,
                     use_prev_commands=bool(use_prev))


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "mirror"
    if isinstance(value, (ResetMode, ActionMode)):
        return value.value
    return str(value)


def render_config(cfg: KitConfig) -> str:
    """Serialize to the file format; every key explicit, defaults included."""
    p, e = cfg.params, cfg.episode
    sections = {
        "physics": {
            **{f"field_{f.name}": getattr(p.field, f.name)
               for f in dataclasses.fields(p.field)},
            **{f"robot_{f.name}": getattr(p.robot, f.name)
               for f in dataclasses.fields(p.robot)},
            **{f"ball_{f.name}": getattr(p.ball, f.name)
               for f in dataclasses.fields(p.ball)},
            "control_dt": p.control_dt,
            "n_substeps": p.n_substeps,
        },
        "env": {
            "max_duration": e.max_duration,
            "n_per_team": e.n_per_team,
            "n_opponents": e.n_opponents,
            "end_on_goal": e.end_on_goal,
            "reset_mode": e.reset_mode,
            "seed": e.seed,
        },
        "rewards": {f.name: getattr(cfg.weights, f.name)
                    for f in dataclasses.fields(cfg.weights)},
        "action": {
            "mode": cfg.action_mode,
            **{f.name: getattr(cfg.action, f.name)
               for f in dataclasses.fields(cfg.action)},
        },
        "channel": {
            "enabled": cfg.channel_enabled,
            **{f.name: getattr(cfg.channel, f.name)
               for f in dataclasses.fields(cfg.channel) if f.init},
        },
        "training": {
            **{f.name: getattr(cfg.training, f.name)
               for f in dataclasses.fields(cfg.training)
               if f.name in _SCHEMA["training"]},
            "use_prev_commands": cfg.use_prev_commands,
            **{f"plant_{f.name}": getattr(cfg.plant, f.name)
               for f in dataclasses.fields(cfg.plant)},
        },
    }
    lines = []
    for name, keys in sections.items():
        lines.append(f"[{name}]")
        for key, value in keys.items():
            lines.append(f"{key} = {_fmt(value)}")
        lines.append("")
    return "\n".join(lines)
