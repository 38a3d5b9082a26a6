"""Core value types for the 5v5 simulation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum, IntEnum
from typing import NamedTuple

from dqnsoccer.config import FieldConfig


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def dist(a: Vec2, b: Vec2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.fmod(a + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi


class Team(Enum):
    HOME = "home"
    AWAY = "away"

    @property
    def other(self) -> "Team":
        return Team.AWAY if self is Team.HOME else Team.HOME

    @property
    def attack_sign(self) -> int:
        """+1 when attacking toward +x (own goal at -x), -1 otherwise."""
        return 1 if self is Team.HOME else -1


class Role(IntEnum):
    GK = 0
    D1 = 1
    D2 = 2
    F1 = 3
    F2 = 4


# ordering used by the observation vector and the joint action digits
FIELD_ROLES: tuple[Role, ...] = (Role.F1, Role.F2, Role.D1, Role.D2)

ROBOTS_PER_TEAM = 5
N_ROBOTS = 10


def slot_of(team: Team, role: Role) -> int:
    return (0 if team is Team.HOME else ROBOTS_PER_TEAM) + int(role)


class PhaseKind(Enum):
    KICKOFF = "kickoff"
    DEFAULT = "default"
    GOAL_KICK = "goal_kick"
    CORNER_KICK = "corner_kick"
    PENALTY_KICK = "penalty_kick"
    RELOCATION = "relocation"


SET_PIECES = (PhaseKind.KICKOFF, PhaseKind.GOAL_KICK, PhaseKind.CORNER_KICK, PhaseKind.PENALTY_KICK)


class DeadlockKind(Enum):
    CORNER = "corner"
    PENALTY_AREA = "penalty_area"
    OTHER = "other"


class WheelCommand(NamedTuple):
    left: float
    right: float


STOP = WheelCommand(0.0, 0.0)


@dataclass(slots=True)
class RobotState:
    pos: Vec2
    heading: float
    role: Role
    team: Team
    wheel_speeds: WheelCommand = STOP
    active: bool = True
    fallen: bool = False
    fallen_for: float = 0.0
    inactive_for: float = 0.0
    # pose at the moment the robot was last on the field; used by observers
    last_seen_pos: Vec2 = Vec2(0.0, 0.0)
    last_seen_heading: float = 0.0

    def clone(self) -> "RobotState":
        return RobotState(
            pos=self.pos,
            heading=self.heading,
            role=self.role,
            team=self.team,
            wheel_speeds=self.wheel_speeds,
            active=self.active,
            fallen=self.fallen,
            fallen_for=self.fallen_for,
            inactive_for=self.inactive_for,
            last_seen_pos=self.last_seen_pos,
            last_seen_heading=self.last_seen_heading,
        )

    def effective_pos(self) -> Vec2:
        return self.pos if self.active else self.last_seen_pos

    def effective_heading(self) -> float:
        return self.heading if self.active else self.last_seen_heading


@dataclass(slots=True)
class BallState:
    pos: Vec2
    vel: Vec2 = Vec2(0.0, 0.0)
    # last three positions, newest first; padded with the initial position
    history: tuple[Vec2, Vec2, Vec2] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.history is None:
            self.history = (self.pos, self.pos, self.pos)

    def clone(self) -> "BallState":
        return BallState(pos=self.pos, vel=self.vel, history=self.history)

    def reset_at(self, pos: Vec2) -> None:
        self.pos = pos
        self.vel = Vec2(0.0, 0.0)
        self.history = (pos, pos, pos)


@dataclass(slots=True)
class GamePhase:
    kind: PhaseKind
    team: Team | None = None
    timer: float = 0.0
    spot: Vec2 | None = None  # ball placement, used for the release check

    def clone(self) -> "GamePhase":
        return GamePhase(self.kind, self.team, self.timer, self.spot)


@dataclass(slots=True)
class Event:
    kind: str
    frame: int
    team: Team | None = None
    slot: int | None = None
    detail: str = ""


@dataclass(slots=True)
class WorldState:
    field: FieldConfig
    robots: list[RobotState]
    ball: BallState
    phase: GamePhase
    frame: int = 0
    score_home: int = 0
    score_away: int = 0
    deadlock_timer: float = 0.0
    owner: Team | None = None
    # (slot, area-owning team) -> frame the robot entered that penalty area
    penalty_entry: dict[tuple[int, Team], int] = dc_field(default_factory=dict)

    @property
    def time(self) -> float:
        return self.frame * self.field.dt

    def robot(self, team: Team, role: Role) -> RobotState:
        return self.robots[slot_of(team, role)]

    def score_of(self, team: Team) -> int:
        return self.score_home if team is Team.HOME else self.score_away

    def clone(self) -> "WorldState":
        return WorldState(
            field=self.field,
            robots=[r.clone() for r in self.robots],
            ball=self.ball.clone(),
            phase=self.phase.clone(),
            frame=self.frame,
            score_home=self.score_home,
            score_away=self.score_away,
            deadlock_timer=self.deadlock_timer,
            owner=self.owner,
            penalty_entry=dict(self.penalty_entry),
        )
