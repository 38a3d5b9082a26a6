import dataclasses
import json

import numpy as np
import pytest

from dqnsoccer.config import AppConfig, FieldConfig
from dqnsoccer.match import MatchResult, read_replay, run_match, verify_replay
from dqnsoccer.policies import BallChaserPolicy, RandomPolicy, ZeroPolicy, make_baseline
from dqnsoccer.sim import Team


def short_cfg(frames_per_half=600) -> AppConfig:
    return AppConfig(field=FieldConfig(frames_per_half=frames_per_half))


def zero_factory(team, rng):
    return ZeroPolicy(team, AppConfig())


def test_zero_vs_zero_is_scoreless_tie():
    cfg = short_cfg()
    result = run_match(zero_factory, zero_factory, cfg, seed=0)
    assert (result.home_goals, result.away_goals) == (0, 0)
    assert result.outcome == "Tie"
    assert result.per_half == ((0, 0), (0, 0))


def test_match_result_deterministic(tmp_path):
    cfg = short_cfg()

    def chaser(team, rng):
        return BallChaserPolicy(team, cfg, rng)

    def random_policy(team, rng):
        return RandomPolicy(team, cfg, rng)

    r1 = run_match(chaser, random_policy, cfg, seed=42, replay_path=tmp_path / "a.jsonl")
    r2 = run_match(chaser, random_policy, cfg, seed=42, replay_path=tmp_path / "b.jsonl")
    assert r1 == r2
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_different_seeds_vary(tmp_path):
    cfg = short_cfg()

    def random_policy(team, rng):
        return RandomPolicy(team, cfg, rng)

    a = run_match(random_policy, random_policy, cfg, seed=1, replay_path=tmp_path / "a.jsonl")
    b = run_match(random_policy, random_policy, cfg, seed=2, replay_path=tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() != (tmp_path / "b.jsonl").read_bytes()


def test_chaser_outscores_passive_team_over_ten_matches():
    cfg = short_cfg(frames_per_half=1500)

    def chaser(team, rng):
        return BallChaserPolicy(team, cfg, rng)

    chaser_goals = passive_goals = 0
    for seed in range(10):
        result = run_match(chaser, zero_factory, cfg, seed=seed)
        chaser_goals += result.home_goals
        passive_goals += result.away_goals
    assert chaser_goals > passive_goals


def test_replay_structure(tmp_path):
    cfg = short_cfg()

    def chaser(team, rng):
        return BallChaserPolicy(team, cfg, rng)

    path = tmp_path / "match.jsonl"
    run_match(chaser, zero_factory, cfg, seed=3, replay_path=path, home_name="c", away_name="z")
    header, frames = read_replay(path)
    assert header["home"] == "c" and header["away"] == "z"
    assert header["config_digest"] == cfg.digest()
    assert len(frames) == 2 * (cfg.field.frames_per_half + 1)
    ids = [f["frame"] for f in frames]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    rec = frames[0]
    assert len(rec["robots"]) == 10 and len(rec["robots"][0]) == 4
    assert rec["phase"] == "kickoff"


def test_replay_rewards_recompute_exactly(tmp_path):
    cfg = short_cfg()

    def chaser(team, rng):
        return BallChaserPolicy(team, cfg, rng)

    def random_policy(team, rng):
        return RandomPolicy(team, cfg, rng)

    path = tmp_path / "match.jsonl"
    run_match(chaser, random_policy, cfg, seed=11, replay_path=path)
    check = verify_replay(path, cfg)
    assert check.mismatches == 0
    assert check.frames == 2 * (cfg.field.frames_per_half + 1)


def test_verify_rejects_wrong_config(tmp_path):
    cfg = short_cfg()
    path = tmp_path / "match.jsonl"
    run_match(zero_factory, zero_factory, cfg, seed=0, replay_path=path)
    other = AppConfig()
    with pytest.raises(ValueError):
        verify_replay(path, other)


def test_verify_detects_tampered_reward(tmp_path):
    cfg = short_cfg()
    path = tmp_path / "match.jsonl"
    run_match(zero_factory, zero_factory, cfg, seed=0, replay_path=path)
    lines = path.read_text().splitlines()
    rec = json.loads(lines[100])
    rec["reward"] = rec["reward"] + 1.0
    lines[100] = json.dumps(rec)
    path.write_text("\n".join(lines) + "\n")
    check = verify_replay(path, cfg)
    assert check.mismatches == 1


def test_outcome_of():
    assert MatchResult.outcome_of(3, 1) == "Win"
    assert MatchResult.outcome_of(1, 3) == "Lose"
    assert MatchResult.outcome_of(2, 2) == "Tie"
