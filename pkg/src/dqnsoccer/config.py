"""Configuration dataclasses and YAML loading.

All settings have working defaults; a config file only needs to name the
fields it overrides, grouped by section, e.g.::

    field:
      length: 9.0
    trainer:
      total_frames: 50000
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

import yaml

Point = tuple[float, float]


@dataclass(frozen=True)
class FieldConfig:
    """Field geometry and simulation constants. Meters, seconds, m/s."""

    length: float = 7.8
    width: float = 4.65
    goal_width: float = 1.0
    goal_depth: float = 0.45
    goal_area_depth: float = 0.5
    goal_area_width: float = 1.8
    penalty_area_depth: float = 1.25
    penalty_area_width: float = 3.0
    corner_region_side: float = 1.0
    relocation_points: tuple[Point, ...] = (
        (1.5, 1.0),
        (1.5, -1.0),
        (-1.5, 1.0),
        (-1.5, -1.0),
    )
    dt: float = 0.05
    frames_per_half: int = 6000
    deadlock_speed_threshold: float = 0.4
    deadlock_duration: float = 4.0
    fall_timeout: float = 3.0
    inactive_duration: float = 5.0
    robot_radius: float = 0.075
    axle_width: float = 0.14
    ball_radius: float = 0.04
    # per-role wheel speed caps, ordered GK, D1, D2, F1, F2
    role_max_speeds: tuple[float, float, float, float, float] = (1.8, 2.1, 2.1, 2.55, 2.55)
    ball_decel: float = 0.5
    kick_gain: float = 1.2
    corner_spot_inset: float = 0.25
    penalty_spot_inset: float = 0.75
    clear_radius: float = 0.5
    set_piece_timeout: float = 3.0
    ball_release_distance: float = 0.05

    def __post_init__(self) -> None:
        if self.length <= 0 or self.width <= 0:
            raise ValueError("field dimensions must be positive")
        if not (self.goal_area_depth <= self.penalty_area_depth <= self.length / 2):
            raise ValueError("goal area must nest inside penalty area inside the field")
        if not (self.goal_area_width <= self.penalty_area_width <= self.width):
            raise ValueError("goal area must nest inside penalty area inside the field")
        if len(self.relocation_points) != 4:
            raise ValueError("exactly 4 relocation points required")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def half_length(self) -> float:
        return self.length / 2

    @property
    def half_width(self) -> float:
        return self.width / 2


@dataclass(frozen=True)
class ActionConfig:
    """Joint-action geometry and the wheel controller gains."""

    offset_delta: float = 0.3          # distance of the four ball-relative targets
    predict_frames: int = 2            # lookahead used for the target anchor
    stop_distance: float = 0.05        # controller deadband around the target
    rotate_threshold_deg: float = 20.0 # above this heading error we turn in place
    turn_gain: float = 0.5
    drive_gain: float = 6.0
    heading_gain: float = 0.5


@dataclass(frozen=True)
class StrategyConfig:
    """Constants for the rule-based goalkeeper and the set-piece scripts."""

    alert_range: float = 1.0
    keeper_line_offset: float = 0.15
    kick_facing_deg: float = 30.0
    y_align_threshold: float = 0.2
    block_clearance: float = 0.25
    boundary_margin: float = 0.15      # how far inside the half line clamped targets sit
    kickoff_arc_radius: float = 0.4
    kickoff_waypoints: int = 5
    waypoint_tolerance: float = 0.1
    stage_tolerance: float = 0.12
    corner_stage_back: float = 0.3
    corner_stage_up: float = 0.25
    penalty_aim_frac: float = 0.25     # aim point above goal center, fraction of goal width
    waiting_x_frac: float = -0.2       # forwards' hold spot while the ball is in our half
    waiting_y_frac: float = 0.25


DEFAULT_REGION_PARAMS: dict[int, tuple[float, float]] = {
    1: (-10.0, 0.0),
    2: (-1.0, 10.0),
    3: (0.5, 10.0),
    4: (1.0, 10.0),
    5: (10.0, 0.0),
    6: (0.0, 10.0),
}


@dataclass(frozen=True)
class RewardConfig:
    """Per-region (constant, distance-gain) pairs for the shaped reward."""

    region_params: dict[int, tuple[float, float]] = dc_field(
        default_factory=lambda: dict(DEFAULT_REGION_PARAMS)
    )

    def __post_init__(self) -> None:
        if set(self.region_params) != {1, 2, 3, 4, 5, 6}:
            raise ValueError("reward params must cover regions 1..6")


@dataclass(frozen=True)
class NetConfig:
    """Q-network architecture and optimizer settings."""

    input_size: int = 22
    hidden_sizes: tuple[int, ...] = (256, 256)
    n_actions: int = 256
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    grad_clip: float | None = None

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.input_size, *self.hidden_sizes, self.n_actions)


@dataclass(frozen=True)
class TrainerConfig:
    gamma: float = 0.99
    batch_size: int = 64
    train_start: int = 5000
    target_sync_period: int = 1000
    replay_capacity: int = 100_000
    total_frames: int = 200_000
    episode_frames: int = 2000
    train_period: int = 1
    seed: int = 0
    epsilon_start: float = 1.0
    epsilon_decrement: float = 0.05
    epsilon_interval: int = 20_000
    epsilon_floor: float = 0.05
    epsilon_unit: str = "updates"  # "updates" or "frames"

    def __post_init__(self) -> None:
        if not (self.batch_size <= self.train_start <= self.replay_capacity):
            raise ValueError("need batch_size <= train_start <= replay_capacity")
        if self.epsilon_unit not in ("updates", "frames"):
            raise ValueError("epsilon_unit must be 'updates' or 'frames'")


@dataclass(frozen=True)
class AppConfig:
    field: FieldConfig = dc_field(default_factory=FieldConfig)
    actions: ActionConfig = dc_field(default_factory=ActionConfig)
    strategy: StrategyConfig = dc_field(default_factory=StrategyConfig)
    rewards: RewardConfig = dc_field(default_factory=RewardConfig)
    net: NetConfig = dc_field(default_factory=NetConfig)
    trainer: TrainerConfig = dc_field(default_factory=TrainerConfig)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Stable hash of the full configuration, recorded in replay headers."""
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


_SECTIONS = {f.name: f.type for f in dataclasses.fields(AppConfig)}


def _build_section(cls: type, data: dict[str, Any], section: str) -> Any:
    known = {f.name: f for f in dataclasses.fields(cls)}
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key not in known:
            raise ValueError(f"unknown config key '{section}.{key}'")
        if isinstance(value, list):
            value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        elif isinstance(value, dict):
            value = {k: tuple(v) if isinstance(v, list) else v for k, v in value.items()}
        kwargs[key] = value
    return cls(**kwargs)


def config_from_dict(data: dict[str, Any]) -> AppConfig:
    section_classes = {
        "field": FieldConfig,
        "actions": ActionConfig,
        "strategy": StrategyConfig,
        "rewards": RewardConfig,
        "net": NetConfig,
        "trainer": TrainerConfig,
    }
    kwargs = {}
    for name, value in (data or {}).items():
        if name not in section_classes:
            raise ValueError(f"unknown config section '{name}'")
        if not isinstance(value, dict):
            raise ValueError(f"config section '{name}' must be a mapping")
        kwargs[name] = _build_section(section_classes[name], value, name)
    return AppConfig(**kwargs)


def load_config(path: str | Path | None) -> AppConfig:
    """Load configuration from a YAML file; no path means all defaults."""
    if path is None:
        return AppConfig()
    raw = Path(path).read_text()
    data = yaml.safe_load(raw)
    if data is None:
        return AppConfig()
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a mapping")
    return config_from_dict(data)
