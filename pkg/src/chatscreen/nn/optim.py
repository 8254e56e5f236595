"""Adam optimizer with bias correction.

Hyperparameter defaults follow the published optimizer: lr 0.001,
beta1 0.9, beta2 0.999, epsilon 1e-7 (applied outside the square root).
"""

from dataclasses import dataclass, field

import numpy as np

from .gru import ShapeMismatchError

__all__ = ["AdamState", "adam_step"]


@dataclass
class AdamState:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7
    step: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def adam_step(params: dict, grads: dict, state: AdamState) -> dict:
    """Apply one Adam update in place to every tensor in params.

    params and grads are dicts of identically keyed, identically shaped
    arrays; moment accumulators are created lazily on the first step.
    """
    if set(grads) != set(params):
        raise ShapeMismatchError(
            f"gradient keys {sorted(grads)} != parameter keys {sorted(params)}")
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    bias1 = 1.0 - b1 ** t
    bias2 = 1.0 - b2 ** t
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeMismatchError(f"{name}: grad {g.shape} vs param {p.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        m_hat = m / bias1
        v_hat = v / bias2
        p -= (state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)).astype(p.dtype)
    return params
