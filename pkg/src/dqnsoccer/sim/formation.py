"""Kickoff formation and field-area helpers."""
from __future__ import annotations

import math

from dqnsoccer.config import FieldConfig
from dqnsoccer.sim.types import (
    STOP,
    BallState,
    GamePhase,
    PhaseKind,
    RobotState,
    Role,
    Team,
    Vec2,
    WorldState,
)

# formation slots in the attacking frame (own goal at -x), as field fractions
_FORMATION_FRACS: dict[Role, tuple[float, float]] = {
    Role.GK: (-0.487, 0.0),
    Role.D1: (-0.29, -0.22),
    Role.D2: (-0.29, 0.22),
    Role.F1: (-0.13, -0.11),
    Role.F2: (-0.064, 0.0),
}


def team_to_world(p: Vec2, team: Team) -> Vec2:
    """Map a point from a team's attacking frame into world coordinates."""
    s = team.attack_sign
    return Vec2(p.x * s, p.y * s)


def world_to_team(p: Vec2, team: Team) -> Vec2:
    return team_to_world(p, team)  # the 180-degree mirror is its own inverse


def formation_pose(field: FieldConfig, team: Team, role: Role) -> tuple[Vec2, float]:
    fx, fy = _FORMATION_FRACS[role]
    pos = team_to_world(Vec2(fx * field.length, fy * field.width), team)
    heading = 0.0 if team is Team.HOME else math.pi
    return pos, heading


def parking_pos(field: FieldConfig, team: Team, role: Role) -> Vec2:
    """Off-field spot for a robot serving its inactive period."""
    pos, _ = formation_pose(field, team, role)
    return Vec2(pos.x, field.half_width + 0.3)


def own_goal_center(field: FieldConfig, team: Team) -> Vec2:
    return Vec2(-team.attack_sign * field.half_length, 0.0)


def opponent_goal_center(field: FieldConfig, team: Team) -> Vec2:
    return Vec2(team.attack_sign * field.half_length, 0.0)


def in_rect(p: Vec2, x_lo: float, x_hi: float, y_lo: float, y_hi: float) -> bool:
    return x_lo <= p.x <= x_hi and y_lo <= p.y <= y_hi


def in_penalty_area(p: Vec2, field: FieldConfig, side: int) -> bool:
    """side=+1 for the area at x>0, side=-1 for the area at x<0."""
    hw = field.penalty_area_width / 2
    if side > 0:
        return in_rect(p, field.half_length - field.penalty_area_depth, field.half_length, -hw, hw)
    return in_rect(p, -field.half_length, -field.half_length + field.penalty_area_depth, -hw, hw)


def in_goal_area(p: Vec2, field: FieldConfig, side: int) -> bool:
    hw = field.goal_area_width / 2
    if side > 0:
        return in_rect(p, field.half_length - field.goal_area_depth, field.half_length, -hw, hw)
    return in_rect(p, -field.half_length, -field.half_length + field.goal_area_depth, -hw, hw)


def in_corner_region(p: Vec2, field: FieldConfig) -> bool:
    s = field.corner_region_side
    return abs(p.x) >= field.half_length - s and abs(p.y) >= field.half_width - s


def own_penalty_side(team: Team) -> int:
    return -team.attack_sign


def initial_world(field: FieldConfig, kicking: Team = Team.HOME) -> WorldState:
    robots = []
    for team in (Team.HOME, Team.AWAY):
        for role in Role:
            pos, heading = formation_pose(field, team, role)
            robots.append(
                RobotState(pos=pos, heading=heading, role=role, team=team,
                           last_seen_pos=pos, last_seen_heading=heading)
            )
    ball = BallState(pos=Vec2(0.0, 0.0))
    phase = GamePhase(PhaseKind.KICKOFF, team=kicking, spot=ball.pos)
    return WorldState(field=field, robots=robots, ball=ball, phase=phase)


def reset_kickoff(world: WorldState, kicking: Team) -> None:
    """Return every robot to its formation slot and restart at a kickoff."""
    field = world.field
    for robot in world.robots:
        pos, heading = formation_pose(field, robot.team, robot.role)
        robot.pos = pos
        robot.heading = heading
        robot.wheel_speeds = STOP
        if robot.active:
            robot.last_seen_pos = pos
            robot.last_seen_heading = heading
        robot.fallen = False
        robot.fallen_for = 0.0
    world.ball.reset_at(Vec2(0.0, 0.0))
    world.phase = GamePhase(PhaseKind.KICKOFF, team=kicking, spot=world.ball.pos)
    world.deadlock_timer = 0.0
    world.owner = None
    world.penalty_entry.clear()
