from dqnsoccer.sim.engine import step
from dqnsoccer.sim.formation import initial_world, reset_kickoff
from dqnsoccer.sim.referee import (
    advance,
    advance_phase,
    apply_deadlock,
    check_goal,
    detect_deadlock,
    enforce_penalty_area_counts,
    handle_falls,
    inject_fall,
)
from dqnsoccer.sim.types import (
    FIELD_ROLES,
    N_ROBOTS,
    ROBOTS_PER_TEAM,
    STOP,
    BallState,
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
    slot_of,
)

__all__ = [
    "step",
    "initial_world",
    "reset_kickoff",
    "advance",
    "advance_phase",
    "apply_deadlock",
    "check_goal",
    "detect_deadlock",
    "enforce_penalty_area_counts",
    "handle_falls",
    "inject_fall",
    "FIELD_ROLES",
    "N_ROBOTS",
    "ROBOTS_PER_TEAM",
    "STOP",
    "BallState",
    "DeadlockKind",
    "Event",
    "GamePhase",
    "PhaseKind",
    "RobotState",
    "Role",
    "Team",
    "Vec2",
    "WheelCommand",
    "WorldState",
    "slot_of",
]
