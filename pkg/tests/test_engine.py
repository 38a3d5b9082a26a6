import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dqnsoccer.config import AppConfig, FieldConfig
from dqnsoccer.sim import STOP, N_ROBOTS, Team, Vec2, WheelCommand, advance, initial_world, step
from dqnsoccer.sim.types import PhaseKind


def zero_commands():
    return [STOP] * N_ROBOTS


def open_play(world):
    world.phase.kind = PhaseKind.DEFAULT
    world.phase.team = None
    world.phase.spot = None
    return world


def test_equal_wheels_drive_straight(field):
    world = open_play(initial_world(field))
    robot = world.robots[0]
    robot.pos = Vec2(0.0, 0.0)
    robot.heading = 0.0
    cmds = zero_commands()
    cmds[0] = WheelCommand(1.0, 1.0)
    step(world, cmds)
    assert robot.pos.x == pytest.approx(0.05)
    assert robot.pos.y == pytest.approx(0.0)
    assert robot.heading == pytest.approx(0.0)


def test_opposite_wheels_rotate_in_place(field):
    world = open_play(initial_world(field))
    robot = world.robots[0]
    robot.pos = Vec2(0.0, 0.0)
    robot.heading = 0.0
    v = 0.5
    cmds = zero_commands()
    cmds[0] = WheelCommand(v, -v)
    step(world, cmds)
    assert robot.pos == Vec2(0.0, 0.0)
    assert robot.heading == pytest.approx(-field.dt * 2 * v / field.axle_width)


def test_zero_commands_fixed_point(field):
    world = open_play(initial_world(field))
    before = world.clone()
    step(world, zero_commands())
    assert world.frame == before.frame + 1
    assert world.ball.pos == before.ball.pos
    for a, b in zip(world.robots, before.robots):
        assert a.pos == b.pos and a.heading == b.heading


def test_wrong_command_count_rejected(field):
    world = initial_world(field)
    with pytest.raises(ValueError):
        step(world, [STOP] * 9)


def test_wheel_speeds_clamped_to_role(field):
    world = open_play(initial_world(field))
    cmds = zero_commands()
    cmds[0] = WheelCommand(99.0, 99.0)  # goalkeeper slot
    step(world, cmds)
    cap = field.role_max_speeds[0]
    assert world.robots[0].wheel_speeds == WheelCommand(cap, cap)


def test_ball_friction_decays_speed(field):
    world = open_play(initial_world(field))
    world.ball.vel = Vec2(1.0, 0.0)
    speeds = []
    for _ in range(50):
        step(world, zero_commands())
        speeds.append(world.ball.vel.norm())
    assert all(b <= a for a, b in zip(speeds, speeds[1:]))
    # constant-deceleration model: first step loses exactly decel * dt
    assert speeds[0] == pytest.approx(1.0 - field.ball_decel * field.dt)


def test_ball_stops_completely(field):
    world = open_play(initial_world(field))
    world.ball.vel = Vec2(0.2, 0.0)
    for _ in range(20):
        step(world, zero_commands())
    assert world.ball.vel.norm() == 0.0


def test_free_flight_speed_never_increases_across_bounces(field):
    world = open_play(initial_world(field))
    for robot in world.robots:
        robot.active = False
        robot.pos = Vec2(0.0, field.half_width + 0.5)
    world.ball.pos = Vec2(0.0, 0.0)
    world.ball.vel = Vec2(2.2, 1.7)  # bounces off several walls before stopping
    prev = world.ball.vel.norm()
    for _ in range(200):
        step(world, zero_commands())
        speed = world.ball.vel.norm()
        assert speed <= prev + 1e-12
        prev = speed
    assert prev == 0.0


def test_side_wall_reflection(field):
    world = open_play(initial_world(field))
    world.ball.pos = Vec2(0.0, field.half_width - field.ball_radius - 0.01)
    world.ball.vel = Vec2(0.0, 1.0)
    step(world, zero_commands())
    assert world.ball.vel.y < 0
    assert abs(world.ball.pos.y) <= field.half_width - field.ball_radius + 1e-9


def test_end_wall_reflects_outside_goal_mouth(field):
    world = open_play(initial_world(field))
    world.ball.pos = Vec2(field.half_length - field.ball_radius - 0.01, 1.5)
    world.ball.vel = Vec2(2.0, 0.0)
    step(world, zero_commands())
    assert world.ball.vel.x < 0


def test_ball_passes_goal_line_inside_mouth(field):
    world = open_play(initial_world(field))
    world.ball.pos = Vec2(field.half_length - 0.02, 0.0)
    world.ball.vel = Vec2(2.0, 0.0)
    step(world, zero_commands())
    assert world.ball.pos.x > field.half_length - field.ball_radius


def test_robot_ball_contact_transfers_velocity(field):
    world = open_play(initial_world(field))
    robot = world.robots[0]
    robot.pos = Vec2(-1.0, 0.0)
    robot.heading = 0.0
    world.ball.pos = Vec2(-1.0 + field.robot_radius + field.ball_radius + 0.04, 0.0)
    world.ball.vel = Vec2(0.0, 0.0)
    cmds = zero_commands()
    cmds[0] = WheelCommand(1.0, 1.0)
    step(world, cmds)
    assert world.ball.vel.x > 0.5
    assert world.owner is Team.HOME


def test_ball_history_shifts(field):
    world = open_play(initial_world(field))
    world.ball.vel = Vec2(1.0, 0.0)
    p0 = world.ball.pos
    step(world, zero_commands())
    p1 = world.ball.pos
    step(world, zero_commands())
    p2 = world.ball.pos
    assert world.ball.history == (p2, p1, p0)


def test_time_tracks_frames(field):
    world = open_play(initial_world(field))
    for _ in range(7):
        step(world, zero_commands())
    assert world.time == pytest.approx(7 * field.dt)


def test_deadlock_timer_counts_only_slow_ball(field):
    world = open_play(initial_world(field))
    world.ball.vel = Vec2(0.3, 0.0)
    step(world, zero_commands())
    assert world.deadlock_timer == pytest.approx(field.dt)
    world.ball.vel = Vec2(1.0, 0.0)
    step(world, zero_commands())
    assert world.deadlock_timer == 0.0


def _random_commands(rng):
    return [WheelCommand(float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))) for _ in range(N_ROBOTS)]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_containment_under_random_play(seed):
    field = FieldConfig()
    rng = np.random.default_rng(seed)
    world = initial_world(field)
    for _ in range(120):
        advance(world, _random_commands(rng))
        bx, by = world.ball.pos
        assert abs(bx) <= field.half_length + 1e-9
        assert abs(by) <= field.half_width + 1e-9
        for robot in world.robots:
            if robot.active:
                assert abs(robot.pos.x) <= field.half_length - field.robot_radius + 1e-9
                assert abs(robot.pos.y) <= field.half_width - field.robot_radius + 1e-9


def test_determinism_bit_identical(field):
    rng1 = np.random.default_rng(7)
    rng2 = np.random.default_rng(7)
    w1 = initial_world(field)
    w2 = initial_world(field)
    for _ in range(300):
        advance(w1, _random_commands(rng1))
        advance(w2, _random_commands(rng2))
        assert w1.ball.pos == w2.ball.pos
        assert w1.deadlock_timer == w2.deadlock_timer
    for a, b in zip(w1.robots, w2.robots):
        assert a.pos == b.pos and a.heading == b.heading
