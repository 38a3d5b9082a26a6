"""Fixed-timestep physics: differential-drive robots, rolling ball, walls.

The model is deliberately simple and fully deterministic: robots are discs
driven by two wheels, the ball is a disc slowed by constant rolling friction,
walls reflect elastically, and a robot touching the ball transfers its
velocity component along the contact normal. One call to :func:`step`
advances exactly one timestep; referee rules live in ``referee.py``.
"""
from __future__ import annotations

import math

from dqnsoccer.sim.types import (
    N_ROBOTS,
    PhaseKind,
    Vec2,
    WheelCommand,
    WorldState,
    clamp,
    wrap_angle,
)


def _clamp_wheels(cmd: WheelCommand, cap: float) -> WheelCommand:
    return WheelCommand(clamp(cmd.left, -cap, cap), clamp(cmd.right, -cap, cap))


def _move_robots(world: WorldState, commands: list[WheelCommand]) -> None:
    field = world.field
    dt = field.dt
    for i, robot in enumerate(world.robots):
        if not robot.active or robot.fallen:
            robot.wheel_speeds = WheelCommand(0.0, 0.0)
            continue
        cap = field.role_max_speeds[int(robot.role)]
        cmd = _clamp_wheels(commands[i], cap)
        robot.wheel_speeds = cmd
        v = 0.5 * (cmd.left + cmd.right)
        omega = (cmd.right - cmd.left) / field.axle_width
        # translate with the pre-step heading, then rotate
        robot.pos = Vec2(
            robot.pos.x + v * dt * math.cos(robot.heading),
            robot.pos.y + v * dt * math.sin(robot.heading),
        )
        robot.heading = wrap_angle(robot.heading + omega * dt)


def _separate_robots(world: WorldState) -> None:
    field = world.field
    min_gap = 2.0 * field.robot_radius
    robots = world.robots
    for i in range(N_ROBOTS):
        a = robots[i]
        if not a.active:
            continue
        for j in range(i + 1, N_ROBOTS):
            b = robots[j]
            if not b.active:
                continue
            dx = b.pos.x - a.pos.x
            dy = b.pos.y - a.pos.y
            d = math.hypot(dx, dy)
            if d >= min_gap:
                continue
            if d < 1e-9:
                nx, ny = 1.0, 0.0  # coincident discs: push apart along +x
            else:
                nx, ny = dx / d, dy / d
            push = 0.5 * (min_gap - d)
            a.pos = Vec2(a.pos.x - nx * push, a.pos.y - ny * push)
            b.pos = Vec2(b.pos.x + nx * push, b.pos.y + ny * push)


def _contain_robots(world: WorldState) -> None:
    field = world.field
    r = field.robot_radius
    x_max = field.half_length - r
    y_max = field.half_width - r
    for robot in world.robots:
        if not robot.active:
            continue
        robot.pos = Vec2(clamp(robot.pos.x, -x_max, x_max), clamp(robot.pos.y, -y_max, y_max))


def _move_ball(world: WorldState) -> None:
    field = world.field
    ball = world.ball
    speed = ball.vel.norm()
    if speed > 0.0:
        new_speed = max(0.0, speed - field.ball_decel * field.dt)
        k = new_speed / speed if speed > 0 else 0.0
        ball.vel = Vec2(ball.vel.x * k, ball.vel.y * k)
    ball.pos = Vec2(ball.pos.x + ball.vel.x * field.dt, ball.pos.y + ball.vel.y * field.dt)


def _kick_contacts(world: WorldState) -> None:
    field = world.field
    ball = world.ball
    touch = field.robot_radius + field.ball_radius
    for robot in world.robots:
        if not robot.active:
            continue
        dx = ball.pos.x - robot.pos.x
        dy = ball.pos.y - robot.pos.y
        d = math.hypot(dx, dy)
        if d >= touch:
            continue
        if d < 1e-9:
            nx, ny = math.cos(robot.heading), math.sin(robot.heading)
        else:
            nx, ny = dx / d, dy / d
        v = 0.5 * (robot.wheel_speeds.left + robot.wheel_speeds.right)
        rvx = v * math.cos(robot.heading)
        rvy = v * math.sin(robot.heading)
        vn_robot = rvx * nx + rvy * ny
        vn_ball = ball.vel.x * nx + ball.vel.y * ny
        if vn_robot > vn_ball:
            dv = field.kick_gain * (vn_robot - vn_ball)
            ball.vel = Vec2(ball.vel.x + dv * nx, ball.vel.y + dv * ny)
        # resolve penetration so the ball does not stick inside the disc
        ball.pos = Vec2(robot.pos.x + nx * touch, robot.pos.y + ny * touch)
        world.owner = robot.team


def _reflect_ball(world: WorldState) -> None:
    field = world.field
    ball = world.ball
    r = field.ball_radius
    y_max = field.half_width - r
    if ball.pos.y > y_max:
        ball.pos = Vec2(ball.pos.x, 2.0 * y_max - ball.pos.y)
        ball.vel = Vec2(ball.vel.x, -abs(ball.vel.y))
    elif ball.pos.y < -y_max:
        ball.pos = Vec2(ball.pos.x, -2.0 * y_max - ball.pos.y)
        ball.vel = Vec2(ball.vel.x, abs(ball.vel.y))
    # end walls reflect except inside the goal mouth, where the ball may
    # cross the line; a back wall caps the goal cavity
    in_mouth = abs(ball.pos.y) <= field.goal_width / 2
    x_wall = field.half_length - r
    x_back = field.half_length + field.goal_depth - r
    if ball.pos.x > x_wall:
        if in_mouth:
            if ball.pos.x > x_back:
                ball.pos = Vec2(2.0 * x_back - ball.pos.x, ball.pos.y)
                ball.vel = Vec2(-abs(ball.vel.x), ball.vel.y)
        else:
            ball.pos = Vec2(2.0 * x_wall - ball.pos.x, ball.pos.y)
            ball.vel = Vec2(-abs(ball.vel.x), ball.vel.y)
    elif ball.pos.x < -x_wall:
        if in_mouth:
            if ball.pos.x < -x_back:
                ball.pos = Vec2(-2.0 * x_back - ball.pos.x, ball.pos.y)
                ball.vel = Vec2(abs(ball.vel.x), ball.vel.y)
        else:
            ball.pos = Vec2(-2.0 * x_wall - ball.pos.x, ball.pos.y)
            ball.vel = Vec2(abs(ball.vel.x), ball.vel.y)


def _tick(value: float, dt: float) -> float:
    # timers advance in whole frames; recomputing n*dt avoids accumulation
    # drift so thresholds like "4.0 s at 20 Hz" fire on the exact frame
    return (round(value / dt) + 1) * dt


def _tick_timers(world: WorldState) -> None:
    field = world.field
    dt = field.dt
    world.frame += 1
    world.phase.timer = _tick(world.phase.timer, dt)
    if world.phase.kind is PhaseKind.DEFAULT:
        if world.ball.vel.norm() < field.deadlock_speed_threshold:
            world.deadlock_timer = _tick(world.deadlock_timer, dt)
        else:
            world.deadlock_timer = 0.0
    else:
        world.deadlock_timer = 0.0
    for robot in world.robots:
        if robot.fallen and robot.active:
            robot.fallen_for = _tick(robot.fallen_for, dt)
        if not robot.active:
            robot.inactive_for = _tick(robot.inactive_for, dt)


def step(world: WorldState, commands: list[WheelCommand]) -> WorldState:
    """Advance the world by one timestep under the given wheel commands.

    Mutates and returns ``world``. Exactly one command per robot slot is
    required. Referee consequences (goals, deadlocks, fouls) are not
    applied here.
    """
    if len(commands) != N_ROBOTS:
        raise ValueError(f"expected {N_ROBOTS} wheel commands, got {len(commands)}")
    _move_robots(world, commands)
    _separate_robots(world)
    _contain_robots(world)
    _move_ball(world)
    _kick_contacts(world)
    _reflect_ball(world)
    ball = world.ball
    ball.history = (ball.pos, ball.history[0], ball.history[1])
    _tick_timers(world)
    return world
