import dataclasses
import json

import numpy as np
import pytest

from dqnsoccer.checkpoint import load_checkpoint
from dqnsoccer.config import AppConfig, FieldConfig, NetConfig, TrainerConfig
from dqnsoccer.training import train


def small_cfg(total_frames, seed=0, **trainer_kw) -> AppConfig:
    trainer = TrainerConfig(
        total_frames=total_frames,
        seed=seed,
        episode_frames=1000,
        replay_capacity=20_000,
        **trainer_kw,
    )
    return AppConfig(
        field=FieldConfig(frames_per_half=1000),
        net=NetConfig(hidden_sizes=(32, 32)),
        trainer=trainer,
    )


def test_no_updates_below_gate(tmp_path):
    cfg = small_cfg(total_frames=300)
    result = train(cfg, tmp_path / "net.ckpt", metrics_path=tmp_path / "m.jsonl")
    assert result.updates == 0
    ckpt = load_checkpoint(tmp_path / "net.ckpt")
    assert ckpt.step == 0
    assert ckpt.epsilon == 1.0


def test_updates_begin_after_gate(tmp_path):
    # buffer reaches the 5000-transition gate at frame 5000, so frames
    # 5000..5200 each perform one update
    cfg = small_cfg(total_frames=5200)
    result = train(cfg, tmp_path / "net.ckpt")
    assert result.updates == 201


def test_deterministic_checkpoints(tmp_path):
    cfg = small_cfg(total_frames=5500, seed=7)
    train(cfg, tmp_path / "a.ckpt", metrics_path=tmp_path / "a.jsonl")
    train(cfg, tmp_path / "b.ckpt", metrics_path=tmp_path / "b.jsonl")
    assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_seed_changes_checkpoint(tmp_path):
    train(small_cfg(total_frames=600, seed=1), tmp_path / "a.ckpt")
    train(small_cfg(total_frames=600, seed=2), tmp_path / "b.ckpt")
    assert (tmp_path / "a.ckpt").read_bytes() != (tmp_path / "b.ckpt").read_bytes()


def test_resume_continues_counters(tmp_path):
    cfg = small_cfg(total_frames=5100)
    first = train(cfg, tmp_path / "a.ckpt")
    assert first.updates == 101
    resumed = train(cfg, tmp_path / "b.ckpt", resume=tmp_path / "a.ckpt")
    ckpt = load_checkpoint(tmp_path / "b.ckpt")
    assert resumed.updates == 202
    assert ckpt.step == 202


def test_resume_rejects_mismatched_dims(tmp_path):
    cfg = small_cfg(total_frames=300)
    train(cfg, tmp_path / "a.ckpt")
    other = dataclasses.replace(cfg, net=NetConfig(hidden_sizes=(16,)))
    with pytest.raises(ValueError):
        train(other, tmp_path / "b.ckpt", resume=tmp_path / "a.ckpt")


def test_metrics_records_are_parseable(tmp_path):
    cfg = small_cfg(total_frames=5200)
    train(cfg, tmp_path / "net.ckpt", metrics_path=tmp_path / "m.jsonl", log_interval=400)
    lines = (tmp_path / "m.jsonl").read_text().splitlines()
    assert len(lines) == 5200 // 400
    for line in lines:
        rec = json.loads(line)
        assert set(rec) == {"frame", "updates", "epsilon", "loss", "reward"}
    last = json.loads(lines[-1])
    assert last["updates"] == 201
    assert last["loss"] is not None


def test_unwritable_output_fails_fast(tmp_path):
    cfg = small_cfg(total_frames=300)
    with pytest.raises(OSError):
        train(cfg, tmp_path / "missing_dir" / "net.ckpt")


def test_epsilon_follows_schedule_unit_frames(tmp_path):
    trainer = TrainerConfig(
        total_frames=900,
        episode_frames=450,
        epsilon_unit="frames",
        epsilon_interval=400,
        epsilon_decrement=0.1,
        replay_capacity=20_000,
    )
    cfg = AppConfig(
        field=FieldConfig(frames_per_half=1000),
        net=NetConfig(hidden_sizes=(16,)),
        trainer=trainer,
    )
    result = train(cfg, tmp_path / "net.ckpt")
    # clock hits 800 frames -> two decrements
    assert result.final_epsilon == pytest.approx(0.8)
