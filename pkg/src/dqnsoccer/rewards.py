"""Region-based shaped reward.

Each field point falls into exactly one of six regions (checked in priority
order): the opponent goal area (5), our goal area (1), the rest of the
opponent penalty area (4), the opponent corner squares (3), the rest of our
half (2), and everything else (6). A player's reward is its region constant
plus the region gain times how much closer the ball got to the opponent
goal over the last two frames.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from dqnsoccer.config import FieldConfig, RewardConfig
from dqnsoccer.sim.types import FIELD_ROLES, Team, Vec2, WorldState


@dataclass(frozen=True)
class GoalDistancePair:
    """Ball-to-opponent-goal distances two frames ago and now."""

    d_prev: float
    d_curr: float


def classify_region(p: Vec2, field: FieldConfig, team: Team) -> int:
    """Map a field point to its reward region for the given team."""
    s = team.attack_sign
    x = p.x * s  # attacking frame: opponent goal at +half_length
    y = p.y * s
    hl, hw = field.half_length, field.half_width
    ga_hw = field.goal_area_width / 2
    if x >= hl - field.goal_area_depth and abs(y) <= ga_hw:
        return 5
    if x <= -hl + field.goal_area_depth and abs(y) <= ga_hw:
        return 1
    if x >= hl - field.penalty_area_depth and abs(y) <= field.penalty_area_width / 2:
        return 4
    side = field.corner_region_side
    if x >= hl - side and abs(y) >= hw - side:
        return 3
    if x < 0.0:
        return 2
    return 6


def agent_reward(region: int, d: GoalDistancePair, params: RewardConfig) -> float:
    c1, c2 = params.region_params[region]
    return c1 + c2 * (d.d_prev - d.d_curr)


def goal_distances(ball_prev2: Vec2, ball_curr: Vec2, field: FieldConfig, team: Team) -> GoalDistancePair:
    goal = Vec2(team.attack_sign * field.half_length, 0.0)
    return GoalDistancePair(
        d_prev=math.hypot(ball_prev2.x - goal.x, ball_prev2.y - goal.y),
        d_curr=math.hypot(ball_curr.x - goal.x, ball_curr.y - goal.y),
    )


def team_reward(
    world_prev2: WorldState, world_curr: WorldState, team: Team, params: RewardConfig
) -> float:
    """Mean shaped reward over the four field players.

    ``world_prev2`` must be the snapshot from two frames before
    ``world_curr``; inactive players count with their last on-field pose.
    """
    field = world_curr.field
    d = goal_distances(world_prev2.ball.pos, world_curr.ball.pos, field, team)
    total = 0.0
    for role in FIELD_ROLES:
        robot = world_curr.robot(team, role)
        region = classify_region(robot.effective_pos(), field, team)
        total += agent_reward(region, d, params)
    return total / len(FIELD_ROLES)
