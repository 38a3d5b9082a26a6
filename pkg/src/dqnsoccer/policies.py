"""Team behaviors: the rule-based goalkeeper, per-phase movement scripts,
and the baseline opponents used for training and evaluation.

All decision logic works in the team's attacking frame (own goal at -x) and
is mirrored into world coordinates at the edges, so one implementation
serves both sides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dqnsoccer import actions as act
from dqnsoccer.config import ActionConfig, AppConfig, FieldConfig, StrategyConfig
from dqnsoccer.dqn import select_action
from dqnsoccer.nn import Mlp
from dqnsoccer.percept import encode_state, predict_ball
from dqnsoccer.sim import formation
from dqnsoccer.sim.types import (
    FIELD_ROLES,
    ROBOTS_PER_TEAM,
    STOP,
    PhaseKind,
    RobotState,
    Role,
    Team,
    Vec2,
    WheelCommand,
    WorldState,
    clamp,
    dist,
    wrap_angle,
)

TeamCommands = list[WheelCommand]  # 5 commands ordered GK, D1, D2, F1, F2


# --------------------------------------------------------------------------
# goalkeeper

@dataclass(frozen=True)
class KeeperContext:
    """Everything the goalkeeper rules look at, in the team frame."""

    team: Team
    keeper: RobotState
    keeper_pos: Vec2          # team frame
    keeper_heading: float     # team frame
    ball_pos: Vec2            # team frame
    ball_vel: Vec2            # team frame
    field: FieldConfig
    strategy: StrategyConfig
    phase: PhaseKind

    @classmethod
    def from_world(cls, world: WorldState, team: Team, strategy: StrategyConfig) -> "KeeperContext":
        keeper = world.robot(team, Role.GK)
        s = team.attack_sign
        return cls(
            team=team,
            keeper=keeper,
            keeper_pos=Vec2(keeper.pos.x * s, keeper.pos.y * s),
            keeper_heading=wrap_angle(keeper.heading if s > 0 else keeper.heading + math.pi),
            ball_pos=Vec2(world.ball.pos.x * s, world.ball.pos.y * s),
            ball_vel=Vec2(world.ball.vel.x * s, world.ball.vel.y * s),
            field=world.field,
            strategy=strategy,
            phase=world.phase.kind,
        )


def _keeper_line_x(field: FieldConfig, strategy: StrategyConfig) -> float:
    return -field.half_length + strategy.keeper_line_offset


def _tracking_target(ctx: KeeperContext) -> Vec2:
    gw = ctx.field.goal_width / 2
    return Vec2(_keeper_line_x(ctx.field, ctx.strategy), clamp(ctx.ball_pos.y, -gw, gw))


def _in_own_penalty_area(ctx: KeeperContext, p: Vec2) -> bool:
    hw = ctx.field.penalty_area_width / 2
    return p.x <= -ctx.field.half_length + ctx.field.penalty_area_depth and abs(p.y) <= hw


def _inside_goal(ctx: KeeperContext, p: Vec2) -> bool:
    near_line = p.x <= -ctx.field.half_length + ctx.field.robot_radius
    return near_line and abs(p.y) <= ctx.field.goal_width / 2


def _gaze_command(robot: RobotState, at: Vec2, field: FieldConfig, cfg: ActionConfig) -> WheelCommand:
    """Rotate in place until the robot faces the given world point."""
    bearing = math.atan2(at.y - robot.pos.y, at.x - robot.pos.x)
    err = wrap_angle(bearing - robot.heading)
    if abs(err) < math.radians(3.0):
        return STOP
    cap = field.role_max_speeds[int(robot.role)]
    s = clamp(cfg.turn_gain * err, -cap, cap)
    return WheelCommand(-s, s)


def goalkeeper_policy(ctx: KeeperContext, cfg: ActionConfig) -> WheelCommand:
    """Rule-based keeper.

    Priorities: escape the goal interior, return to the penalty area, then
    either deal with a ball inside the area (get goal-side of a ball behind,
    kick away a ball ahead when roughly facing it, otherwise block the
    mouth) or, with the ball outside, gaze when it is close and aligned and
    track its y along the goal line otherwise.
    """
    if not ctx.keeper.active:
        return STOP
    field, strategy = ctx.field, ctx.strategy
    k, ball = ctx.keeper_pos, ctx.ball_pos
    target: Vec2 | None = None
    if _inside_goal(ctx, k):
        target = Vec2(_keeper_line_x(field, strategy) + 0.1, clamp(k.y, -field.goal_width / 2, field.goal_width / 2))
    elif not _in_own_penalty_area(ctx, k):
        target = _tracking_target(ctx)
    elif _in_own_penalty_area(ctx, ball):
        if ball.x < k.x:  # ball is goal-side of the keeper
            if abs(ball.y - k.y) > strategy.block_clearance:
                gap = field.robot_radius + field.ball_radius + 0.05
                target = Vec2(ball.x - gap, ball.y)
            else:
                side = 1.0 if k.y >= ball.y else -1.0
                target = Vec2(k.x, ball.y + side * 0.35)
        else:
            bearing = math.atan2(ball.y - k.y, ball.x - k.x)
            err = wrap_angle(bearing - ctx.keeper_heading)
            if abs(err) <= math.radians(strategy.kick_facing_deg):
                away = Vec2(ball.x + field.half_length, ball.y)  # from own goal center
                n = math.hypot(away.x, away.y) or 1.0
                target = Vec2(ball.x + away.x / n * 0.25, ball.y + away.y / n * 0.25)
            else:
                target = _tracking_target(ctx)
    else:
        aligned = abs(ball.y - k.y) <= strategy.y_align_threshold
        if dist(ball, k) <= strategy.alert_range and aligned:
            return _gaze_command(ctx.keeper, formation.team_to_world(ball, ctx.team), field, cfg)
        target = _tracking_target(ctx)
    world_target = formation.team_to_world(target, ctx.team)
    return act.target_to_wheels(ctx.keeper, world_target, field, cfg)


# --------------------------------------------------------------------------
# set-piece scripts

@dataclass
class KickoffPlan:
    """Arc around the ball, then a straight drive at the opponent goal."""

    waypoints: list[Vec2]      # world frame
    shoot_target: Vec2         # world frame
    tolerance: float
    progress: int = 0
    started_frame: int = 0

    @classmethod
    def build(cls, world: WorldState, team: Team, strategy: StrategyConfig) -> "KickoffPlan":
        field = world.field
        ball = world.ball.pos
        r = strategy.kickoff_arc_radius
        n = strategy.kickoff_waypoints
        pts = []
        for i in range(n):
            phi = math.pi / 2 + (math.pi / 2) * i / (n - 1)  # above the ball to behind it
            local = Vec2(ball.x * team.attack_sign + r * math.cos(phi),
                         ball.y * team.attack_sign + r * math.sin(phi))
            pts.append(formation.team_to_world(local, team))
        return cls(
            waypoints=pts,
            shoot_target=formation.opponent_goal_center(field, team),
            tolerance=strategy.waypoint_tolerance,
            started_frame=world.frame,
        )

    def current_target(self, pos: Vec2) -> Vec2:
        while self.progress < len(self.waypoints) and dist(pos, self.waypoints[self.progress]) < self.tolerance:
            self.progress += 1
        if self.progress < len(self.waypoints):
            return self.waypoints[self.progress]
        return self.shoot_target


def _corner_kick_target(world: WorldState, team: Team, strategy: StrategyConfig) -> Vec2:
    """Stage to the attacking-frame left of the ball, then shoot through it."""
    ball = world.ball.pos
    kicker = world.robot(team, Role.F2)
    sy = 1.0 if ball.y * team.attack_sign >= 0 else -1.0
    stage_local = Vec2(-strategy.corner_stage_back, sy * strategy.corner_stage_up)
    stage = ball + formation.team_to_world(stage_local, team)
    if dist(kicker.pos, stage) > strategy.stage_tolerance:
        return _clamp_to_field(stage, world.field)
    through = Vec2(ball.x - stage.x, ball.y - stage.y)
    n = math.hypot(through.x, through.y) or 1.0
    return _clamp_to_field(Vec2(ball.x + through.x / n * 1.5, ball.y + through.y / n * 1.5), world.field)


def _penalty_kick_target(world: WorldState, team: Team, strategy: StrategyConfig) -> Vec2:
    field = world.field
    aim_local = Vec2(field.half_length, strategy.penalty_aim_frac * field.goal_width)
    return formation.team_to_world(aim_local, team)


def _clamp_to_field(p: Vec2, field: FieldConfig) -> Vec2:
    return Vec2(clamp(p.x, -field.half_length, field.half_length),
                clamp(p.y, -field.half_width, field.half_width))


# --------------------------------------------------------------------------
# per-phase command assembly

def _default_commands(
    world: WorldState, team: Team, targets: act.TargetSet, cfg: AppConfig
) -> TeamCommands:
    field, strategy = cfg.field, cfg.strategy
    s = team.attack_sign
    ball_local_x = world.ball.pos.x * s
    keeper = world.robot(team, Role.GK)
    ctx = KeeperContext.from_world(world, team, strategy)
    commands: dict[Role, WheelCommand] = {Role.GK: goalkeeper_policy(ctx, cfg.actions)}

    margin = strategy.boundary_margin
    by_role = dict(zip(FIELD_ROLES, targets))
    for role in FIELD_ROLES:
        t = by_role[role]
        local = Vec2(t.x * s, t.y * s)
        if role in (Role.D1, Role.D2):
            # defenders keep to our half; over-the-line targets keep only their y
            if local.x > -margin:
                local = Vec2(-margin, local.y)
            if role is Role.D1 and ball_local_x < 0.0:
                support_x = -field.half_length + field.penalty_area_depth + 0.2
                local = Vec2(support_x, keeper.pos.y * s)
        else:
            if ball_local_x < 0.0:
                # hold a safe spot while the ball is in our half
                wy = strategy.waiting_y_frac * field.width
                local = Vec2(
                    strategy.waiting_x_frac * field.length,
                    wy if role is Role.F1 else -wy,
                )
            elif local.x < margin:
                # forwards keep to the opponent half outside the hold rule
                local = Vec2(margin, local.y)
        world_target = formation.team_to_world(local, team)
        robot = world.robot(team, role)
        commands[role] = act.target_to_wheels(robot, world_target, field, cfg.actions)
    return [commands[r] for r in Role]


def phase_overrides(
    world: WorldState,
    team: Team,
    targets: act.TargetSet,
    cfg: AppConfig,
    kickoff_plan: KickoffPlan | None = None,
) -> TeamCommands:
    """Final per-robot commands for one team, after phase rules.

    During set pieces only the designated robot of the kicking team moves
    (the defending goalkeeper may also move at a penalty kick); open play
    applies the half-boundary and own-half-hold rules on top of the given
    targets.
    """
    phase = world.phase
    field = cfg.field
    zeros: TeamCommands = [STOP] * ROBOTS_PER_TEAM

    if phase.kind is PhaseKind.DEFAULT:
        return _default_commands(world, team, targets, cfg)
    if phase.kind is PhaseKind.RELOCATION:
        return zeros

    ours = phase.team is team
    commands = list(zeros)
    if phase.kind is PhaseKind.KICKOFF:
        if ours:
            kicker = world.robot(team, Role.F2)
            plan_target = (
                kickoff_plan.current_target(kicker.pos)
                if kickoff_plan is not None
                else formation.opponent_goal_center(field, team)
            )
            commands[Role.F2] = act.target_to_wheels(kicker, plan_target, field, cfg.actions)
    elif phase.kind is PhaseKind.GOAL_KICK:
        if ours:
            vmax = field.role_max_speeds[Role.GK]
            commands[Role.GK] = WheelCommand(vmax, vmax)
    elif phase.kind is PhaseKind.CORNER_KICK:
        if ours:
            kicker = world.robot(team, Role.F2)
            commands[Role.F2] = act.target_to_wheels(
                kicker, _corner_kick_target(world, team, cfg.strategy), field, cfg.actions
            )
    elif phase.kind is PhaseKind.PENALTY_KICK:
        if ours:
            kicker = world.robot(team, Role.F2)
            commands[Role.F2] = act.target_to_wheels(
                kicker, _penalty_kick_target(world, team, cfg.strategy), field, cfg.actions
            )
        else:
            ctx = KeeperContext.from_world(world, team, cfg.strategy)
            commands[Role.GK] = goalkeeper_policy(ctx, cfg.actions)
    return commands


# --------------------------------------------------------------------------
# team policies

class TeamPolicy:
    """Produces the five wheel commands for one team each frame."""

    name = "base"

    def __init__(self, team: Team, cfg: AppConfig, rng: np.random.Generator | None = None):
        self.team = team
        self.cfg = cfg
        self.rng = rng
        self.last_action: int | None = None
        self._plan: KickoffPlan | None = None

    def reset(self) -> None:
        """Drop per-episode state; call when the world is re-created."""
        self.last_action = None
        self._plan = None

    def commands(self, world: WorldState) -> TeamCommands:
        plan = self._kickoff_plan(world)
        targets = self._targets(world)
        return phase_overrides(world, self.team, targets, self.cfg, plan)

    def _targets(self, world: WorldState) -> act.TargetSet:
        raise NotImplementedError

    def _kickoff_plan(self, world: WorldState) -> KickoffPlan | None:
        phase = world.phase
        if phase.kind is not PhaseKind.KICKOFF or phase.team is not self.team:
            self._plan = None
            return None
        started = world.frame - round(phase.timer / world.field.dt)
        if self._plan is None or self._plan.started_frame != started:
            plan = KickoffPlan.build(world, self.team, self.cfg.strategy)
            plan.started_frame = started
            self._plan = plan
        return self._plan

    def _anchor(self, world: WorldState) -> Vec2:
        return predict_ball(world.ball.history, self.cfg.actions.predict_frames, world.field)


class RandomPolicy(TeamPolicy):
    """Each field player picks a uniform ball-relative direction every frame."""

    name = "random"

    def _targets(self, world: WorldState) -> act.TargetSet:
        dirs = tuple(act.Dir(int(d)) for d in self.rng.integers(0, 4, size=4))
        return act.resolve_targets(
            dirs, self._anchor(world), self.cfg.actions.offset_delta, world.field, self.team
        )


class BallChaserPolicy(TeamPolicy):
    """Every field player drives straight at the current ball position."""

    name = "chaser"

    def _targets(self, world: WorldState) -> act.TargetSet:
        ball = world.ball.pos
        return act.TargetSet(ball, ball, ball, ball)


class DqnPolicy(TeamPolicy):
    """Greedy (or epsilon-greedy) policy over a trained Q-network."""

    name = "dqn"

    def __init__(
        self,
        team: Team,
        cfg: AppConfig,
        net: Mlp,
        epsilon: float = 0.0,
        rng: np.random.Generator | None = None,
    ):
        super().__init__(team, cfg, rng if rng is not None else np.random.default_rng(0))
        self.net = net
        self.epsilon = epsilon
        self.last_state: np.ndarray | None = None

    def _targets(self, world: WorldState) -> act.TargetSet:
        state = encode_state(world, self.team, self.cfg.actions.predict_frames)
        action = select_action(self.net, state, self.epsilon, self.rng)
        self.last_state = state
        self.last_action = action
        return act.resolve_targets(
            act.decode_action(action),
            self._anchor(world),
            self.cfg.actions.offset_delta,
            world.field,
            self.team,
        )


class ZeroPolicy(TeamPolicy):
    """Sends stop commands to every robot; bypasses all scripts."""

    name = "zero"

    def commands(self, world: WorldState) -> TeamCommands:
        return [STOP] * ROBOTS_PER_TEAM


BASELINES = {
    "random": RandomPolicy,
    "chaser": BallChaserPolicy,
    "zero": ZeroPolicy,
}


def make_baseline(kind: str, team: Team, cfg: AppConfig, rng: np.random.Generator) -> TeamPolicy:
    try:
        cls = BASELINES[kind]
    except KeyError:
        raise ValueError(f"unknown baseline '{kind}'") from None
    return cls(team, cfg, rng)
