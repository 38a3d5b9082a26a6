"""Observation encoding: a 22-value normalized snapshot of one team's view.

Layout: four field players (F1, F2, D1, D2) contribute (x, y, heading,
active) each; the ball position appears twice to weight it; the final two
values are the ball position extrapolated two frames ahead. Everything is
mirrored for the away team so either side sees its own goal at x = -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dqnsoccer.config import FieldConfig
from dqnsoccer.sim.types import FIELD_ROLES, Team, Vec2, WorldState, clamp, wrap_angle

STATE_SIZE = 22


@dataclass(frozen=True)
class Normalizer:
    half_length: float
    half_width: float

    @classmethod
    def from_field(cls, field: FieldConfig) -> "Normalizer":
        return cls(field.half_length, field.half_width)

    def norm_x(self, x: float) -> float:
        return clamp(x / self.half_length, -1.0, 1.0)

    def norm_y(self, y: float) -> float:
        return clamp(y / self.half_width, -1.0, 1.0)

    @staticmethod
    def norm_heading(theta: float) -> float:
        return wrap_angle(theta) / math.pi


def predict_ball(history: tuple[Vec2, Vec2, Vec2], k: int, field: FieldConfig) -> Vec2:
    """Extrapolate the ball k frames ahead from its last two positions."""
    if k < 0:
        raise ValueError("lookahead must be non-negative")
    cur, prev = history[0], history[1]
    x = cur.x + k * (cur.x - prev.x)
    y = cur.y + k * (cur.y - prev.y)
    return Vec2(
        clamp(x, -field.half_length, field.half_length),
        clamp(y, -field.half_width, field.half_width),
    )


def _mirror(p: Vec2) -> Vec2:
    return Vec2(-p.x, -p.y)


def encode_state(world: WorldState, team: Team, predict_frames: int = 2) -> np.ndarray:
    """Build the 22-value observation for one team."""
    field = world.field
    norm = Normalizer.from_field(field)
    mirror = team is Team.AWAY
    out = np.empty(STATE_SIZE, dtype=np.float32)
    i = 0
    for role in FIELD_ROLES:
        robot = world.robot(team, role)
        pos = robot.effective_pos()
        heading = robot.effective_heading()
        if mirror:
            pos = _mirror(pos)
            heading = heading + math.pi
        out[i] = norm.norm_x(pos.x)
        out[i + 1] = norm.norm_y(pos.y)
        out[i + 2] = norm.norm_heading(heading)
        out[i + 3] = 1.0 if robot.active else 0.0
        i += 4
    ball = world.ball.pos
    pred = predict_ball(world.ball.history, predict_frames, field)
    if mirror:
        ball = _mirror(ball)
        pred = _mirror(pred)
    bx, by = norm.norm_x(ball.x), norm.norm_y(ball.y)
    out[16], out[17] = bx, by
    out[18], out[19] = bx, by
    out[20], out[21] = norm.norm_x(pred.x), norm.norm_y(pred.y)
    return out
