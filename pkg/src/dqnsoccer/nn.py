"""Feed-forward Q-network with hand-written backprop and Adam.

Parameters live in plain numpy arrays (float32 by default); the flat layout
used for serialization and gradient probing is W1 (row-major, in x out),
b1, W2, b2, ... in order.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np


@dataclass
class Mlp:
    dims: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def dtype(self) -> np.dtype:
        return self.weights[0].dtype

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def param_count(self) -> int:
        return sum(w.size for w in self.weights) + sum(b.size for b in self.biases)

    def clone(self) -> "Mlp":
        return Mlp(self.dims, [w.copy() for w in self.weights], [b.copy() for b in self.biases])


def init_network(dims: tuple[int, ...], rng: np.random.Generator, dtype=np.float32) -> Mlp:
    """He-uniform weights, zero biases; reproducible from the generator."""
    if len(dims) < 2:
        raise ValueError("need at least an input and an output size")
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)).astype(dtype))
        biases.append(np.zeros(fan_out, dtype=dtype))
    return Mlp(tuple(dims), weights, biases)


def forward(net: Mlp, x: np.ndarray) -> np.ndarray:
    """ReLU hidden layers, linear head. Accepts one input or a batch."""
    x = np.asarray(x, dtype=net.dtype)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != net.dims[0]:
        raise ValueError(f"input size {x.shape[1]} != expected {net.dims[0]}")
    h = x
    last = net.n_layers - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        h = h @ w + b
        if i < last:
            np.maximum(h, 0.0, out=h)
    return h[0] if single else h


def backward(
    net: Mlp, inputs: np.ndarray, action_indices: np.ndarray, targets: np.ndarray
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean squared error on the selected outputs; gradients for all layers.

    Only the output picked by each row's action index receives loss; ReLU
    passes zero gradient at non-positive pre-activations.
    """
    x = np.asarray(inputs, dtype=net.dtype)
    actions = np.asarray(action_indices, dtype=np.int64)
    t = np.asarray(targets, dtype=net.dtype)
    n = x.shape[0]
    last = net.n_layers - 1
    pre: list[np.ndarray] = []
    acts: list[np.ndarray] = [x]
    h = x
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0) if i < last else z
        acts.append(h)
    out = acts[-1]
    rows = np.arange(n)
    diff = out[rows, actions] - t
    loss = float(np.mean(diff.astype(np.float64) ** 2))
    d_out = np.zeros_like(out)
    d_out[rows, actions] = (2.0 / n) * diff
    grad_w: list[np.ndarray] = [None] * net.n_layers  # type: ignore[list-item]
    grad_b: list[np.ndarray] = [None] * net.n_layers  # type: ignore[list-item]
    delta = d_out
    for i in range(last, -1, -1):
        grad_w[i] = acts[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i].T) * (pre[i - 1] > 0)
    return loss, grad_w, grad_b


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m_w: list[np.ndarray] = dc_field(default_factory=list)
    v_w: list[np.ndarray] = dc_field(default_factory=list)
    m_b: list[np.ndarray] = dc_field(default_factory=list)
    v_b: list[np.ndarray] = dc_field(default_factory=list)

    @classmethod
    def for_network(cls, net: Mlp, lr=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8) -> "AdamState":
        return cls(
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            epsilon=epsilon,
            m_w=[np.zeros_like(w) for w in net.weights],
            v_w=[np.zeros_like(w) for w in net.weights],
            m_b=[np.zeros_like(b) for b in net.biases],
            v_b=[np.zeros_like(b) for b in net.biases],
        )


def adam_step(net: Mlp, grad_w: list[np.ndarray], grad_b: list[np.ndarray], state: AdamState) -> None:
    """One bias-corrected Adam update; the epsilon sits inside the sqrt."""
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for params, grads, ms, vs in (
        (net.weights, grad_w, state.m_w, state.v_w),
        (net.biases, grad_b, state.m_b, state.v_b),
    ):
        for p, g, m, v in zip(params, grads, ms, vs):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * np.square(g)
            p -= state.lr * (m / c1) / np.sqrt(v / c2 + state.epsilon)


def clip_gradients(grad_w: list[np.ndarray], grad_b: list[np.ndarray], cap: float) -> None:
    """Clamp every gradient entry to [-cap, cap] in place."""
    for g in (*grad_w, *grad_b):
        np.clip(g, -cap, cap, out=g)


def params_flat(net: Mlp) -> np.ndarray:
    """Concatenate all parameters in the documented layer order."""
    parts = []
    for w, b in zip(net.weights, net.biases):
        parts.append(w.ravel())
        parts.append(b.ravel())
    return np.concatenate(parts)


def set_params_flat(net: Mlp, flat: np.ndarray) -> None:
    if flat.size != net.param_count:
        raise ValueError(f"expected {net.param_count} parameters, got {flat.size}")
    flat = np.asarray(flat, dtype=net.dtype)
    i = 0
    for w, b in zip(net.weights, net.biases):
        w[...] = flat[i : i + w.size].reshape(w.shape)
        i += w.size
        b[...] = flat[i : i + b.size]
        i += b.size
