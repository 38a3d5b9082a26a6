"""Q-learning machinery: exploration schedule, action selection, targets,
the gated gradient step, and target-network synchronization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dqnsoccer.config import TrainerConfig
from dqnsoccer.nn import AdamState, Mlp, adam_step, backward, clip_gradients, forward
from dqnsoccer.replay import Batch, ReplayBuffer


@dataclass(frozen=True)
class EpsilonSchedule:
    """Stepwise-decaying exploration rate with a floor."""

    start: float = 1.0
    decrement: float = 0.05
    interval: int = 20_000
    floor: float = 0.05

    def value(self, step: int) -> float:
        if step < 0:
            raise ValueError("step must be non-negative")
        return max(self.floor, self.start - self.decrement * (step // self.interval))

    @classmethod
    def from_trainer(cls, cfg: TrainerConfig) -> "EpsilonSchedule":
        return cls(cfg.epsilon_start, cfg.epsilon_decrement, cfg.epsilon_interval, cfg.epsilon_floor)


def select_action(net: Mlp, state: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy over the network head; ties go to the lowest index."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must be in [0, 1]")
    n_actions = net.dims[-1]
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(n_actions))
    q = forward(net, state)
    return int(np.argmax(q))


def td_targets(batch: Batch, target_net: Mlp, gamma: float) -> np.ndarray:
    """Bootstrap targets: reward, plus the discounted best next Q unless done."""
    q_next = forward(target_net, batch.next_states)
    best = q_next.max(axis=1)
    cont = ~batch.dones
    return (batch.rewards + gamma * best * cont).astype(np.float32)


def train_step(
    behavior: Mlp,
    target: Mlp,
    buffer: ReplayBuffer,
    cfg: TrainerConfig,
    adam: AdamState,
    rng: np.random.Generator,
    grad_clip: float | None = None,
) -> float | None:
    """One gradient update; a no-op (None) until the buffer reaches the gate."""
    if len(buffer) < cfg.train_start:
        return None
    batch = buffer.sample(cfg.batch_size, rng)
    targets = td_targets(batch, target, cfg.gamma)
    loss, grad_w, grad_b = backward(behavior, batch.states, batch.actions, targets)
    if grad_clip is not None:
        clip_gradients(grad_w, grad_b, grad_clip)
    adam_step(behavior, grad_w, grad_b, adam)
    return loss


def sync_target(behavior: Mlp, target: Mlp) -> None:
    """Copy behavior parameters into the target network, bit for bit."""
    if behavior.dims != target.dims:
        raise ValueError(f"architecture mismatch: {behavior.dims} vs {target.dims}")
    for tw, bw in zip(target.weights, behavior.weights):
        tw[...] = bw
    for tb, bb in zip(target.biases, behavior.biases):
        tb[...] = bb
