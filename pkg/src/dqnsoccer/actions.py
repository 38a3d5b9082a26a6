"""Joint action codec and the low-level wheel controller.

A joint action is one index in [0, 256): a base-4 number whose digits, most
significant first, pick a ball-relative direction for F1, F2, D1, D2. The
direction order (above, below, left, right) matches the one-hot layout used
by the network head.
"""
from __future__ import annotations

import math
from enum import IntEnum
from typing import NamedTuple

from dqnsoccer.config import ActionConfig, FieldConfig
from dqnsoccer.sim.types import (
    RobotState,
    Team,
    Vec2,
    WheelCommand,
    clamp,
    dist,
    wrap_angle,
)

N_ACTIONS = 256


class Dir(IntEnum):
    ABOVE = 0
    BELOW = 1
    LEFT = 2
    RIGHT = 3


DirQuad = tuple[Dir, Dir, Dir, Dir]


class TargetSet(NamedTuple):
    """One target point per field player, ordered F1, F2, D1, D2."""

    f1: Vec2
    f2: Vec2
    d1: Vec2
    d2: Vec2


def decode_action(action: int) -> DirQuad:
    """Split a joint action into per-player directions (F1 most significant)."""
    if not 0 <= action < N_ACTIONS:
        raise ValueError(f"joint action must be in [0, {N_ACTIONS}), got {action}")
    return (
        Dir((action >> 6) & 3),
        Dir((action >> 4) & 3),
        Dir((action >> 2) & 3),
        Dir(action & 3),
    )


def encode_action(dirs: DirQuad) -> int:
    f1, f2, d1, d2 = dirs
    return (int(f1) << 6) | (int(f2) << 4) | (int(d1) << 2) | int(d2)


# direction offsets in the attacking frame (+x toward the opponent goal)
_OFFSETS = {
    Dir.ABOVE: (0.0, 1.0),
    Dir.BELOW: (0.0, -1.0),
    Dir.LEFT: (-1.0, 0.0),
    Dir.RIGHT: (1.0, 0.0),
}


def resolve_targets(
    dirs: DirQuad, predicted_ball: Vec2, delta: float, field: FieldConfig, team: Team
) -> TargetSet:
    """Turn directions into world-frame target points around the ball."""
    s = team.attack_sign
    points = []
    for d in dirs:
        ox, oy = _OFFSETS[d]
        points.append(
            Vec2(
                clamp(predicted_ball.x + s * ox * delta, -field.half_length, field.half_length),
                clamp(predicted_ball.y + s * oy * delta, -field.half_width, field.half_width),
            )
        )
    return TargetSet(*points)


def target_to_wheels(
    robot: RobotState, target: Vec2, field: FieldConfig, cfg: ActionConfig
) -> WheelCommand:
    """Two-phase point controller: turn in place when badly aligned, else drive.

    Returns a stop command inside the deadband and for inactive robots.
    """
    if not robot.active:
        return WheelCommand(0.0, 0.0)
    d = dist(robot.pos, target)
    if d < cfg.stop_distance:
        return WheelCommand(0.0, 0.0)
    cap = field.role_max_speeds[int(robot.role)]
    bearing = math.atan2(target.y - robot.pos.y, target.x - robot.pos.x)
    err = wrap_angle(bearing - robot.heading)
    if abs(err) > math.radians(cfg.rotate_threshold_deg):
        s = clamp(cfg.turn_gain * err, -cap, cap)
        return WheelCommand(-s, s)
    base = min(cfg.drive_gain * d, cap)
    corr = cfg.heading_gain * err
    return WheelCommand(clamp(base - corr, -cap, cap), clamp(base + corr, -cap, cap))
