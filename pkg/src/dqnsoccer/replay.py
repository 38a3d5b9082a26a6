"""Uniform experience replay over preallocated ring storage."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class Transition(NamedTuple):
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


class Batch(NamedTuple):
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray


class ReplayBuffer:
    """Fixed-capacity ring buffer; overwrites the oldest entry when full."""

    def __init__(self, capacity: int, state_size: int):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.state_size = state_size
        self._states = np.zeros((capacity, state_size), dtype=np.float32)
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity, dtype=np.float32)
        self._next_states = np.zeros((capacity, state_size), dtype=np.float32)
        self._dones = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, t: Transition) -> None:
        i = self._next
        self._states[i] = t.state
        self._actions[i] = t.action
        self._rewards[i] = t.reward
        self._next_states[i] = t.next_state
        self._dones[i] = t.done
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def get(self, index: int) -> Transition:
        """Read back one stored transition, oldest first."""
        if not 0 <= index < self._size:
            raise IndexError(index)
        if self._size == self.capacity:
            i = (self._next + index) % self.capacity
        else:
            i = index
        return Transition(
            self._states[i].copy(),
            int(self._actions[i]),
            float(self._rewards[i]),
            self._next_states[i].copy(),
            bool(self._dones[i]),
        )

    def sample(self, n: int, rng: np.random.Generator) -> Batch:
        """Draw n transitions uniformly with replacement."""
        if self._size < n:
            raise ValueError(f"buffer holds {self._size} transitions, need {n}")
        idx = rng.integers(0, self._size, size=n)
        if self._size == self.capacity:
            idx = (self._next + idx) % self.capacity
        return Batch(
            self._states[idx],
            self._actions[idx],
            self._rewards[idx],
            self._next_states[idx],
            self._dones[idx],
        )
