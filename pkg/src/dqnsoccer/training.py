"""End-to-end training: simulator rollouts feeding the replay buffer, gated
gradient updates, periodic target sync, metrics, and checkpoints.

The learner controls the home slots against a scripted opponent. Every
frame stores one transition; updates begin once the buffer holds enough
and run every ``train_period`` frames after that. A fixed seed makes the
whole run, including the final checkpoint bytes, reproducible.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from dqnsoccer.checkpoint import load_checkpoint, save_checkpoint
from dqnsoccer.config import AppConfig
from dqnsoccer.dqn import EpsilonSchedule, sync_target, train_step
from dqnsoccer.nn import AdamState, init_network
from dqnsoccer.percept import encode_state
from dqnsoccer.policies import DqnPolicy, TeamPolicy, make_baseline
from dqnsoccer.replay import ReplayBuffer, Transition
from dqnsoccer.rewards import team_reward
from dqnsoccer.sim import advance, initial_world
from dqnsoccer.sim.types import Team


def opponent_policy(spec: str, team: Team, cfg: AppConfig, rng: np.random.Generator) -> TeamPolicy:
    """Resolve an opponent spec: a baseline name or ``checkpoint:PATH``."""
    if spec.startswith("checkpoint:"):
        net = load_checkpoint(spec.split(":", 1)[1]).to_network()
        return DqnPolicy(team, cfg, net, epsilon=0.0, rng=rng)
    return make_baseline(spec, team, cfg, rng)


@dataclass(frozen=True)
class TrainResult:
    checkpoint_path: Path
    metrics_path: Path | None
    frames: int
    updates: int
    final_epsilon: float


def _check_writable(path: Path) -> None:
    probe = Path(str(path) + ".probe")
    try:
        probe.write_bytes(b"")
    except OSError as exc:
        raise OSError(f"output path not writable: {path}") from exc
    probe.unlink()


def train(
    cfg: AppConfig,
    checkpoint_path: str | Path,
    metrics_path: str | Path | None = None,
    opponent: str = "chaser",
    resume: str | Path | None = None,
    checkpoint_interval: int | None = None,
    log_interval: int = 1000,
) -> TrainResult:
    """Run the training loop defined by ``cfg.trainer``."""
    tcfg = cfg.trainer
    field = cfg.field
    checkpoint_path = Path(checkpoint_path)
    metrics_path = Path(metrics_path) if metrics_path is not None else None
    _check_writable(checkpoint_path)
    if metrics_path is not None:
        _check_writable(metrics_path)

    ss = np.random.SeedSequence(tcfg.seed)
    init_rng, action_rng, sample_rng, opp_rng = (np.random.default_rng(c) for c in ss.spawn(4))

    behavior = init_network(cfg.net.dims, init_rng)
    target = behavior.clone()
    adam = AdamState.for_network(
        behavior, cfg.net.learning_rate, cfg.net.beta1, cfg.net.beta2, cfg.net.adam_epsilon
    )
    n_updates = 0
    if resume is not None:
        ckpt = load_checkpoint(resume)
        if ckpt.dims != behavior.dims:
            raise ValueError(f"checkpoint dims {ckpt.dims} do not match config {behavior.dims}")
        behavior = ckpt.to_network()
        target = behavior.clone()
        adam = AdamState.for_network(
            behavior, cfg.net.learning_rate, cfg.net.beta1, cfg.net.beta2, cfg.net.adam_epsilon
        )
        n_updates = ckpt.step

    buffer = ReplayBuffer(tcfg.replay_capacity, cfg.net.input_size)
    schedule = EpsilonSchedule.from_trainer(tcfg)

    metrics_file = open(metrics_path, "w") if metrics_path is not None else None
    recent_loss: deque[float] = deque(maxlen=100)
    recent_reward: deque[float] = deque(maxlen=1000)

    world = initial_world(field, kicking=Team.HOME)
    learner = DqnPolicy(Team.HOME, cfg, behavior, epsilon=schedule.value(0), rng=action_rng)
    opp = opponent_policy(opponent, Team.AWAY, cfg, opp_rng)
    snapshots: deque = deque(maxlen=3)
    snapshots.append(world.clone())
    frame_in_episode = 0
    epsilon = learner.epsilon

    try:
        for frame in range(1, tcfg.total_frames + 1):
            clock = n_updates if tcfg.epsilon_unit == "updates" else frame - 1
            epsilon = schedule.value(clock)
            learner.epsilon = epsilon
            home_cmds = learner.commands(world)
            state, action = learner.last_state, learner.last_action
            away_cmds = opp.commands(world)
            advance(world, home_cmds + away_cmds)
            snapshots.append(world.clone())
            reward = team_reward(snapshots[0], snapshots[-1], Team.HOME, cfg.rewards)
            next_state = encode_state(world, Team.HOME, cfg.actions.predict_frames)
            frame_in_episode += 1
            done = frame_in_episode >= tcfg.episode_frames
            buffer.push(Transition(state, action, reward, next_state, done))
            recent_reward.append(reward)

            if done:
                world = initial_world(field, kicking=Team.HOME)
                learner.reset()
                opp.reset()
                snapshots.clear()
                snapshots.append(world.clone())
                frame_in_episode = 0

            if frame % tcfg.train_period == 0:
                loss = train_step(behavior, target, buffer, tcfg, adam, sample_rng, cfg.net.grad_clip)
                if loss is not None:
                    n_updates += 1
                    recent_loss.append(loss)
                    if n_updates % tcfg.target_sync_period == 0:
                        sync_target(behavior, target)

            if metrics_file is not None and frame % log_interval == 0:
                record = {
                    "frame": frame,
                    "updates": n_updates,
                    "epsilon": epsilon,
                    "loss": float(np.mean(recent_loss)) if recent_loss else None,
                    "reward": float(np.mean(recent_reward)) if recent_reward else None,
                }
                metrics_file.write(json.dumps(record) + "\n")

            if checkpoint_interval is not None and frame % checkpoint_interval == 0:
                save_checkpoint(checkpoint_path, behavior, n_updates, epsilon)
    finally:
        if metrics_file is not None:
            metrics_file.close()

    save_checkpoint(checkpoint_path, behavior, n_updates, epsilon)
    return TrainResult(
        checkpoint_path=checkpoint_path,
        metrics_path=metrics_path,
        frames=tcfg.total_frames,
        updates=n_updates,
        final_epsilon=epsilon,
    )
