"""Rulebook: deadlocks, set pieces, goals, falls, and area-count fouls.

The individual rule checks are exposed as standalone functions so each can
be exercised directly; :func:`advance` composes one physics step with the
full rule pipeline and is what match runners use.
"""
from __future__ import annotations

import math

from dqnsoccer.sim import engine, formation
from dqnsoccer.sim.types import (
    N_ROBOTS,
    SET_PIECES,
    DeadlockKind,
    Event,
    GamePhase,
    PhaseKind,
    RobotState,
    Role,
    Team,
    Vec2,
    WheelCommand,
    WorldState,
    clamp,
    dist,
    slot_of,
)


def detect_deadlock(world: WorldState) -> DeadlockKind | None:
    """Report a deadlock once the ball has stayed slow for the full window.

    Only meaningful during open play; the deadlock timer is frozen at zero
    in every other phase.
    """
    field = world.field
    if world.phase.kind is not PhaseKind.DEFAULT:
        return None
    if world.deadlock_timer < field.deadlock_duration:
        return None
    p = world.ball.pos
    if formation.in_corner_region(p, field):
        return DeadlockKind.CORNER
    if formation.in_penalty_area(p, field, 1) or formation.in_penalty_area(p, field, -1):
        return DeadlockKind.PENALTY_AREA
    return DeadlockKind.OTHER


def _defender_of_side(side: int) -> Team:
    """Team whose own goal sits on the given x side."""
    return Team.AWAY if side > 0 else Team.HOME


def _clear_around_ball(world: WorldState, keep: set[int]) -> None:
    """Push every robot not in ``keep`` out to the clearance radius."""
    field = world.field
    ball = world.ball.pos
    for i, robot in enumerate(world.robots):
        if i in keep or not robot.active:
            continue
        d = dist(robot.pos, ball)
        if d >= field.clear_radius:
            continue
        if d < 1e-9:
            nx, ny = 1.0 if robot.team is Team.HOME else -1.0, 0.0
        else:
            nx, ny = (robot.pos.x - ball.x) / d, (robot.pos.y - ball.y) / d
        robot.pos = Vec2(ball.x + nx * field.clear_radius, ball.y + ny * field.clear_radius)
    engine._contain_robots(world)


def _place_robot(robot: RobotState, pos: Vec2, heading: float | None = None) -> None:
    robot.pos = pos
    if heading is not None:
        robot.heading = heading
    if robot.active:
        robot.last_seen_pos = robot.pos
        robot.last_seen_heading = robot.heading


def _enter_phase(world: WorldState, kind: PhaseKind, team: Team | None) -> None:
    world.phase = GamePhase(kind, team=team, spot=world.ball.pos)
    world.deadlock_timer = 0.0


def _setup_corner_kick(world: WorldState, team: Team) -> None:
    field = world.field
    ball = world.ball.pos
    sx = 1.0 if ball.x >= 0 else -1.0
    sy = 1.0 if ball.y >= 0 else -1.0
    spot = Vec2(
        sx * (field.half_length - field.corner_spot_inset),
        sy * (field.half_width - field.corner_spot_inset),
    )
    world.ball.reset_at(spot)
    kicker = world.robot(team, Role.F2)
    if kicker.active:
        # stage the kicker toward the field center so the first touch is inward
        toward = Vec2(-sx, -sy)
        n = math.hypot(toward.x, toward.y)
        offset = Vec2(toward.x / n * 0.35, toward.y / n * 0.35)
        _place_robot(kicker, spot + offset, math.atan2(-offset.y, -offset.x))
    _clear_around_ball(world, keep={slot_of(team, Role.F2)})
    _enter_phase(world, PhaseKind.CORNER_KICK, team)


def _setup_goal_kick(world: WorldState, team: Team) -> None:
    field = world.field
    side = formation.own_penalty_side(team)
    spot = Vec2(side * (field.half_length - field.goal_area_depth), 0.0)
    world.ball.reset_at(spot)
    keeper = world.robot(team, Role.GK)
    if keeper.active:
        attack_heading = 0.0 if team is Team.HOME else math.pi
        _place_robot(keeper, Vec2(spot.x + side * 0.2, 0.0), attack_heading)
    _clear_around_ball(world, keep={slot_of(team, Role.GK)})
    _enter_phase(world, PhaseKind.GOAL_KICK, team)


def _setup_penalty_kick(world: WorldState, team: Team) -> None:
    field = world.field
    target_side = team.attack_sign
    spot = Vec2(target_side * (field.half_length - field.penalty_spot_inset), 0.0)
    world.ball.reset_at(spot)
    # kicker staged on the line from the goal center through the ball
    aim = Vec2(target_side * field.half_length, 0.25 * field.goal_width)
    away = Vec2(spot.x - aim.x, spot.y - aim.y)
    n = math.hypot(away.x, away.y)
    kicker = world.robot(team, Role.F2)
    if kicker.active:
        stage = Vec2(spot.x + away.x / n * 0.3, spot.y + away.y / n * 0.3)
        _place_robot(kicker, stage, math.atan2(-away.y / n, -away.x / n))
    defender = team.other
    keeper = world.robot(defender, Role.GK)
    if keeper.active:
        line = Vec2(target_side * (field.half_length - 0.08), 0.0)
        _place_robot(keeper, line, math.pi if target_side > 0 else 0.0)
    # everyone else leaves the penalty area and the ball's surroundings
    keep = {slot_of(team, Role.F2), slot_of(defender, Role.GK)}
    for i, robot in enumerate(world.robots):
        if i in keep or not robot.active:
            continue
        if formation.in_penalty_area(robot.pos, field, target_side):
            _place_robot(robot, _nearest_exit(robot.pos, field, target_side))
    _clear_around_ball(world, keep=keep)
    _enter_phase(world, PhaseKind.PENALTY_KICK, team)


def _setup_relocation(world: WorldState) -> None:
    field = world.field
    ball = world.ball.pos
    best = min(field.relocation_points, key=lambda p: (ball.x - p[0]) ** 2 + (ball.y - p[1]) ** 2)
    world.ball.reset_at(Vec2(best[0], best[1]))
    _clear_around_ball(world, keep=set())
    _enter_phase(world, PhaseKind.RELOCATION, None)


def apply_deadlock(world: WorldState, kind: DeadlockKind) -> WorldState:
    """Resolve a detected deadlock into the appropriate restart."""
    field = world.field
    ball = world.ball.pos
    if kind is DeadlockKind.CORNER:
        side = 1 if ball.x >= 0 else -1
        owner = world.owner or _defender_of_side(side)
        _setup_corner_kick(world, owner)
    elif kind is DeadlockKind.PENALTY_AREA:
        side = 1 if formation.in_penalty_area(ball, field, 1) else -1
        owner = world.owner
        if owner is not None and owner.attack_sign == side:
            _setup_penalty_kick(world, owner)
        else:
            _setup_goal_kick(world, _defender_of_side(side))
    else:
        _setup_relocation(world)
    return world


def check_goal(world: WorldState) -> Team | None:
    """Award a goal if the ball has crossed a goal line inside the mouth."""
    field = world.field
    ball = world.ball.pos
    if abs(ball.y) > field.goal_width / 2:
        return None
    if ball.x > field.half_length:
        scorer = Team.HOME
    elif ball.x < -field.half_length:
        scorer = Team.AWAY
    else:
        return None
    if scorer is Team.HOME:
        world.score_home += 1
    else:
        world.score_away += 1
    formation.reset_kickoff(world, kicking=scorer.other)
    return scorer


def handle_falls(world: WorldState) -> list[Event]:
    """Remove robots fallen past the timeout; restore them after serving."""
    field = world.field
    events: list[Event] = []
    for i, robot in enumerate(world.robots):
        if robot.active and robot.fallen and robot.fallen_for >= field.fall_timeout:
            robot.last_seen_pos = robot.pos
            robot.last_seen_heading = robot.heading
            robot.active = False
            robot.fallen = False
            robot.fallen_for = 0.0
            robot.inactive_for = 0.0
            robot.pos = formation.parking_pos(field, robot.team, robot.role)
            events.append(Event("fall_removed", world.frame, robot.team, i))
        elif not robot.active and robot.inactive_for >= field.inactive_duration:
            pos, heading = formation.formation_pose(field, robot.team, robot.role)
            robot.active = True
            robot.inactive_for = 0.0
            robot.pos = pos
            robot.heading = heading
            robot.last_seen_pos = pos
            robot.last_seen_heading = heading
            events.append(Event("fall_returned", world.frame, robot.team, i))
    return events


def inject_fall(world: WorldState, slot: int) -> None:
    """Mark a robot as fallen; the 2D physics never tips one on its own."""
    robot = world.robots[slot]
    if robot.active:
        robot.fallen = True


def _nearest_exit(p: Vec2, field, side: int) -> Vec2:
    """Closest point just outside the penalty area on the given side."""
    margin = 0.1
    hw = field.penalty_area_width / 2
    if side > 0:
        x_edge = field.half_length - field.penalty_area_depth
        dx = p.x - x_edge  # displacement needed to leave through the front face
    else:
        x_edge = -field.half_length + field.penalty_area_depth
        dx = x_edge - p.x
    dy = hw - abs(p.y)  # displacement to leave through a side face
    if dx <= dy:
        x = x_edge - margin if side > 0 else x_edge + margin
        return Vec2(x, p.y)
    y = hw + margin if p.y >= 0 else -(hw + margin)
    return Vec2(clamp(p.x, -field.half_length + 0.1, field.half_length - 0.1), y)


def enforce_penalty_area_counts(world: WorldState) -> list[Event]:
    """Relocate the most recent robot over the occupancy limits.

    Defenders may keep at most 3 robots in their own penalty area and
    attackers at most 2 in the opponent's; one excess robot is moved out
    per violation and a foul event is emitted.
    """
    field = world.field
    events: list[Event] = []
    for side in (1, -1):
        area_owner = _defender_of_side(side)
        inside: dict[int, RobotState] = {
            i: r
            for i, r in enumerate(world.robots)
            if r.active and formation.in_penalty_area(r.pos, field, side)
        }
        # refresh entry bookkeeping for this area
        for i in range(N_ROBOTS):
            key = (i, area_owner)
            if i in inside:
                world.penalty_entry.setdefault(key, world.frame)
            else:
                world.penalty_entry.pop(key, None)
        for team, limit in ((area_owner, 3), (area_owner.other, 2)):
            members = [i for i, r in inside.items() if r.team is team]
            if len(members) <= limit:
                continue
            latest = max(members, key=lambda i: (world.penalty_entry[(i, area_owner)], i))
            robot = world.robots[latest]
            _place_robot(robot, _nearest_exit(robot.pos, field, side))
            world.penalty_entry.pop((latest, area_owner), None)
            events.append(Event("foul_area_count", world.frame, team, latest))
    return events


def advance_phase(world: WorldState) -> bool:
    """End a set piece once the ball is released or the phase times out."""
    field = world.field
    phase = world.phase
    if phase.kind is PhaseKind.RELOCATION:
        if phase.timer > 0.0:
            _enter_phase(world, PhaseKind.DEFAULT, None)
            return True
        return False
    if phase.kind in SET_PIECES:
        released = phase.spot is not None and dist(world.ball.pos, phase.spot) > field.ball_release_distance
        if released or phase.timer >= field.set_piece_timeout:
            _enter_phase(world, PhaseKind.DEFAULT, None)
            return True
    return False


def advance(world: WorldState, commands: list[WheelCommand]) -> list[Event]:
    """One physics step followed by the full rule pipeline."""
    engine.step(world, commands)
    events: list[Event] = []
    scorer = check_goal(world)
    if scorer is not None:
        events.append(Event("goal", world.frame, scorer))
    else:
        kind = detect_deadlock(world)
        if kind is not None:
            apply_deadlock(world, kind)
            events.append(Event("deadlock", world.frame, world.phase.team, detail=kind.value))
    events.extend(handle_falls(world))
    events.extend(enforce_penalty_area_counts(world))
    if advance_phase(world):
        events.append(Event("phase_open", world.frame))
    return events
