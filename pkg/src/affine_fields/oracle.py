"""Fixed-step RK4 integration of integral-curve ODEs du/dt = f(u).

This is the independent check for every closed-form flow in the package: it
consumes only a right-hand-side callable, never the flow module itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_STEP = 1e-3


class DivergenceError(RuntimeError):
    """Raised when the integration state stops being finite."""

    def __init__(self, time: float):
        super().__init__(f"non-finite state at t={time}")
        self.time = time


@dataclass(frozen=True)
class OdeProblem:
    """Initial value problem integrated from t = 0 to t_end."""

    rhs: Callable[[np.ndarray], np.ndarray]
    start: np.ndarray
    t_end: float
    step: float = DEFAULT_STEP

    def __post_init__(self):
        start = np.array(self.start, dtype=float).reshape(-1)
        object.__setattr__(self, "start", start)
        if not np.isfinite(self.t_end):
            raise ValueError("t_end must be finite")
        if self.step <= 0.0:
            raise ValueError("step must be positive")
        if self.t_end != 0.0 and self.step > abs(self.t_end):
            raise ValueError("step must not exceed |t_end|")


def _rk4_step(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def integrate(problem: OdeProblem) -> np.ndarray:
    """Classical RK4 with fixed step; the last step is shortened to land
    exactly on t_end.  Global error is O(step^4)."""
    y = problem.start.copy()
    t_end = problem.t_end
    if t_end == 0.0:
        return y
    direction = 1.0 if t_end > 0.0 else -1.0
    h = direction * problem.step
    n_full = int(abs(t_end) / problem.step)
    rhs = problem.rhs
    t = 0.0
    for k in range(n_full):
        y = _rk4_step(rhs, y, h)
        t = (k + 1) * h
        if not np.all(np.isfinite(y)):
            raise DivergenceError(t)
    tail = t_end - n_full * h
    if abs(tail) > 1e-15 * abs(t_end):
        y = _rk4_step(rhs, y, tail)
        if not np.all(np.isfinite(y)):
            raise DivergenceError(t_end)
    return y
