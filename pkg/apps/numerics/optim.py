import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from apps.corecode.exceptions import ShapeError

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    """Moment buffers and step counter for bias-corrected Adam.

    Buffers are keyed by parameter name and zero-initialized on creation.
    """

    first: Dict[str, np.ndarray]
    second: Dict[str, np.ndarray]
    learning_rate: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = field(default=0)

    @classmethod
    def for_params(cls, params, learning_rate=1e-4, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(
            first={name: np.zeros_like(value) for name, value in params.items()},
            second={name: np.zeros_like(value) for name, value in params.items()},
            learning_rate=learning_rate,
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )


def adam_step(state, params, grads, learning_rate=None):
    """One Adam update. Returns new parameter arrays; ``state`` is advanced in place.

    ``learning_rate`` overrides ``state.learning_rate`` for this step so a
    schedule can drive the optimizer.
    """
    lr = state.learning_rate if learning_rate is None else float(learning_rate)
    if set(params) != set(state.first):
        missing = sorted(set(params) ^ set(state.first))
        raise ShapeError(f"parameters and optimizer state disagree on {missing[:3]}")
    for name, value in params.items():
        if name not in grads:
            raise ShapeError(f"{name}: no gradient supplied")
        grad, moment = grads[name], state.first[name]
        if grad.shape != value.shape or moment.shape != value.shape:
            raise ShapeError(
                f"{name}: gradient {grad.shape} / state {moment.shape} "
                f"do not match parameter {value.shape}"
            )

    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t
    updated = {}
    for name, value in params.items():
        grad = grads[name]
        m = state.beta1 * state.first[name] + (1.0 - state.beta1) * grad
        v = state.beta2 * state.second[name] + (1.0 - state.beta2) * grad * grad
        state.first[name], state.second[name] = m, v
        m_hat = m / correction1
        v_hat = v / correction2
        updated[name] = value - lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return updated
