"""Seeded match runner, replay logs, and replay verification.

A match is two halves; sides swap at halftime, so whichever policy defended
-x in the first half defends +x in the second. Replays are JSON-lines: one
header record, then one record per frame carrying the full pose state, the
home slots' chosen action (when the controller exposes one), and the home
slots' shaped reward. Logged rewards can be recomputed exactly from the
logged poses alone.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TextIO

import numpy as np

from dqnsoccer.config import AppConfig
from dqnsoccer.rewards import agent_reward, classify_region, goal_distances, team_reward
from dqnsoccer.sim import advance, initial_world
from dqnsoccer.sim.types import FIELD_ROLES, Team, Vec2, WorldState, slot_of
from dqnsoccer.policies import TeamPolicy

PolicyFactory = Callable[[Team, np.random.Generator], TeamPolicy]

REPLAY_VERSION = 1


@dataclass(frozen=True)
class MatchResult:
    home_goals: int
    away_goals: int
    outcome: str  # "Win", "Lose" or "Tie" from the home side
    per_half: tuple[tuple[int, int], tuple[int, int]]
    seed: int

    @staticmethod
    def outcome_of(home: int, away: int) -> str:
        if home > away:
            return "Win"
        if home < away:
            return "Lose"
        return "Tie"


def _frame_record(
    world: WorldState,
    global_frame: int,
    half: int,
    score: tuple[int, int],
    action: int | None,
    reward: float,
) -> dict:
    phase = world.phase
    return {
        "frame": global_frame,
        "half": half,
        "phase": phase.kind.value,
        "phase_team": phase.team.value if phase.team else None,
        "score": list(score),
        "ball": [world.ball.pos.x, world.ball.pos.y],
        # inactive robots are logged at their last on-field pose, which is
        # also the pose observers and rewards see
        "robots": [
            [r.effective_pos().x, r.effective_pos().y, r.effective_heading(), 1 if r.active else 0]
            for r in world.robots
        ],
        "action": action,
        "reward": reward,
    }


class ReplayWriter:
    def __init__(self, stream: TextIO, cfg: AppConfig, seed: int, home: str, away: str):
        self._stream = stream
        header = {
            "kind": "header",
            "version": REPLAY_VERSION,
            "config_digest": cfg.digest(),
            "seed": seed,
            "home": home,
            "away": away,
        }
        self._write(header)

    def _write(self, record: dict) -> None:
        self._stream.write(json.dumps(record) + "\n")

    def frame(self, record: dict) -> None:
        self._write(record)


def _run_half(
    world: WorldState,
    controllers: dict[Team, TeamPolicy],
    cfg: AppConfig,
    frames: int,
    writer: ReplayWriter | None,
    half: int,
    frame_offset: int,
    score_map: Callable[[WorldState], tuple[int, int]],
) -> None:
    snapshots: deque[WorldState] | None = deque(maxlen=3) if writer is not None else None
    if writer is not None:
        snapshots.append(world.clone())
        reward = team_reward(snapshots[0], snapshots[-1], Team.HOME, cfg.rewards)
        writer.frame(_frame_record(world, frame_offset, half, score_map(world), None, reward))
    for _ in range(frames):
        home_cmds = controllers[Team.HOME].commands(world)
        away_cmds = controllers[Team.AWAY].commands(world)
        advance(world, home_cmds + away_cmds)
        if writer is not None:
            snapshots.append(world.clone())
            reward = team_reward(snapshots[0], snapshots[-1], Team.HOME, cfg.rewards)
            writer.frame(
                _frame_record(
                    world,
                    frame_offset + world.frame,
                    half,
                    score_map(world),
                    controllers[Team.HOME].last_action,
                    reward,
                )
            )


def run_match(
    make_home: PolicyFactory,
    make_away: PolicyFactory,
    cfg: AppConfig,
    seed: int,
    replay_path: str | Path | None = None,
    home_name: str = "home",
    away_name: str = "away",
) -> MatchResult:
    """Play a full two-half match; fully determined by (config, seed)."""
    field = cfg.field
    ss = np.random.SeedSequence(seed)
    rngs = [np.random.default_rng(child) for child in ss.spawn(4)]

    stream = open(replay_path, "w") if replay_path is not None else None
    writer = (
        ReplayWriter(stream, cfg, seed, home_name, away_name) if stream is not None else None
    )
    try:
        # first half: the home policy's team kicks off and defends -x
        world = initial_world(field, kicking=Team.HOME)
        controllers = {
            Team.HOME: make_home(Team.HOME, rngs[0]),
            Team.AWAY: make_away(Team.AWAY, rngs[1]),
        }
        _run_half(
            world, controllers, cfg, field.frames_per_half, writer, 1, 0,
            lambda w: (w.score_home, w.score_away),
        )
        h1 = (world.score_home, world.score_away)

        # second half: sides swap, the other policy's slots kick off
        world = initial_world(field, kicking=Team.HOME)
        controllers = {
            Team.HOME: make_away(Team.HOME, rngs[2]),
            Team.AWAY: make_home(Team.AWAY, rngs[3]),
        }
        _run_half(
            world, controllers, cfg, field.frames_per_half, writer, 2, field.frames_per_half + 1,
            lambda w: (h1[0] + w.score_away, h1[1] + w.score_home),
        )
        h2 = (world.score_away, world.score_home)  # back to the home policy's view
    finally:
        if stream is not None:
            stream.close()

    home_goals = h1[0] + h2[0]
    away_goals = h1[1] + h2[1]
    return MatchResult(
        home_goals=home_goals,
        away_goals=away_goals,
        outcome=MatchResult.outcome_of(home_goals, away_goals),
        per_half=(h1, h2),
        seed=seed,
    )


@dataclass(frozen=True)
class ReplayCheck:
    frames: int
    mismatches: int
    first_mismatch: int | None


def read_replay(path: str | Path) -> tuple[dict, list[dict]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError("empty replay file")
    header = json.loads(lines[0])
    if header.get("kind") != "header":
        raise ValueError("replay file missing header record")
    return header, [json.loads(line) for line in lines[1:]]


def verify_replay(path: str | Path, cfg: AppConfig) -> ReplayCheck:
    """Recompute every logged reward from the logged poses.

    Rewards must match bit for bit; frame numbers must be strictly
    increasing.
    """
    header, frames = read_replay(path)
    if header.get("config_digest") != cfg.digest():
        raise ValueError("replay was recorded under a different configuration")
    field = cfg.field
    home_slots = [slot_of(Team.HOME, role) for role in FIELD_ROLES]
    balls: deque[Vec2] = deque(maxlen=3)
    mismatches = 0
    first_bad: int | None = None
    prev_frame = -1
    prev_half = None
    for rec in frames:
        if rec["frame"] <= prev_frame:
            raise ValueError(f"frame numbers not strictly increasing at {rec['frame']}")
        prev_frame = rec["frame"]
        if rec.get("half") != prev_half:
            balls.clear()
            prev_half = rec.get("half")
        ball = Vec2(rec["ball"][0], rec["ball"][1])
        balls.append(ball)
        d = goal_distances(balls[0], ball, field, Team.HOME)
        total = 0.0
        for slot in home_slots:
            x, y, _, _active = rec["robots"][slot]
            total += agent_reward(classify_region(Vec2(x, y), field, Team.HOME), d, cfg.rewards)
        expected = total / len(home_slots)
        if expected != rec["reward"]:
            mismatches += 1
            if first_bad is None:
                first_bad = rec["frame"]
    return ReplayCheck(frames=len(frames), mismatches=mismatches, first_mismatch=first_bad)
