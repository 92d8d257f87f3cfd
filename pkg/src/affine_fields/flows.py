"""Closed-form flows of affine fields and the flow-map algebra.

The time-t map of the field x -> C x + B is one of

* translation        x + t B                      (C = 0)
* exponential        exp(tC) x                    (B = 0)
* shifted            exp(tC)(x - U0) + U0         (C U0 + B = 0 solvable)
* augmented          homogeneous-embedding exponential (the remaining case)

where U0 is any fixed point of the field.  The augmented form evaluates
exp(t [[C, B], [0, 0]]) applied to (x, 1) and agrees with the other three on
their domains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import AffineField, ZERO_TOLERANCE
from .linalg import augment_affine, mat_exp, solve_linear

TRANSLATION = "translation"
EXPONENTIAL = "exponential"
SHIFTED_EXPONENTIAL = "shifted-exponential"
AUGMENTED_EXPONENTIAL = "augmented-exponential"

_FORMS = (TRANSLATION, EXPONENTIAL, SHIFTED_EXPONENTIAL, AUGMENTED_EXPONENTIAL)

# A declared fixed point must satisfy C U0 + B = 0 to this accuracy.
FIXED_POINT_RESIDUAL = 1e-10


@dataclass(frozen=True)
class FlowMap:
    """Closed-form flow of an affine field; immutable and pure to evaluate."""

    field: AffineField
    form: str
    fixed_point: np.ndarray | None = None

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ValueError(f"unknown flow form {self.form!r}")
        if self.form == SHIFTED_EXPONENTIAL:
            if self.fixed_point is None:
                raise ValueError("shifted-exponential form requires a fixed point")
            u0 = np.array(self.fixed_point, dtype=float).reshape(-1)
            if u0.size != self.field.n:
                raise ValueError("fixed point dimension mismatch")
            residual = np.linalg.norm(self.field.C @ u0 + self.field.B)
            if residual > FIXED_POINT_RESIDUAL * (1.0 + np.linalg.norm(self.field.B)):
                raise ValueError(
                    f"fixed point residual {residual:.3e} exceeds "
                    f"{FIXED_POINT_RESIDUAL:.0e}"
                )
            u0.flags.writeable = False
            object.__setattr__(self, "fixed_point", u0)
        elif self.fixed_point is not None:
            raise ValueError(f"form {self.form!r} takes no fixed point")


def make_flow(field: AffineField) -> FlowMap:
    """Select the closed form for the field's flow.

    Constant fields translate, linear fields are exponential, and a genuinely
    affine field is a shifted exponential about a fixed point whenever
    C U0 = -B is solvable.  When B has a component outside the range of C no
    fixed point exists and the flow falls back to the homogeneous embedding.
    """
    c_zero = np.max(np.abs(field.C)) <= ZERO_TOLERANCE
    b_zero = np.max(np.abs(field.B)) <= ZERO_TOLERANCE
    if c_zero:
        return FlowMap(field, TRANSLATION)
    if b_zero:
        return FlowMap(field, EXPONENTIAL)
    u0, _ = solve_linear(field.C, -field.B)
    if u0 is not None:
        return FlowMap(field, SHIFTED_EXPONENTIAL, fixed_point=u0)
    return FlowMap(field, AUGMENTED_EXPONENTIAL)


def flow_at(flow: FlowMap, t: float, x) -> np.ndarray:
    """Image of the point x under the time-t flow map."""
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    p = np.asarray(x, dtype=float).reshape(-1)
    field = flow.field
    if p.size != field.n:
        raise ValueError(f"point has dim {p.size}, flow lives on R^{field.n}")
    if t == 0.0:
        # The time-zero map is the identity exactly, not just up to rounding.
        return p.copy()
    if flow.form == TRANSLATION:
        return p + t * field.B
    if flow.form == EXPONENTIAL:
        return mat_exp(t * field.C) @ p
    if flow.form == SHIFTED_EXPONENTIAL:
        u0 = flow.fixed_point
        return mat_exp(t * field.C) @ (p - u0) + u0
    big = mat_exp(t * augment_affine(field.C, field.B))
    n = field.n
    return big[:n, :n] @ p + big[:n, n]


def group_law_defect(flow: FlowMap, s: float, t: float, x) -> float:
    """Norm of flow(s + t, x) minus flow(s, flow(t, x)).

    The one-parameter group law holds exactly in real arithmetic; this
    statistic measures its floating-point defect.
    """
    direct = flow_at(flow, s + t, x)
    composed = flow_at(flow, s, flow_at(flow, t, x))
    return float(np.linalg.norm(direct - composed))


@dataclass(frozen=True)
class Orbit:
    """Sampled integral path: points[k] is the flow at times[k] from start."""

    start: np.ndarray
    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        start = np.array(self.start, dtype=float).reshape(-1)
        times = np.array(self.times, dtype=float).reshape(-1)
        points = np.array(self.points, dtype=float)
        for arr in (start, times, points):
            arr.flags.writeable = False
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)


def orbit(flow: FlowMap, x, t_grid) -> Orbit:
    """Evaluate the flow from x at each time in t_grid."""
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if times.size == 0:
        raise ValueError("time grid is empty")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid has non-finite entries")
    start = np.asarray(x, dtype=float).reshape(-1)
    points = np.stack([flow_at(flow, t, start) for t in times])
    return Orbit(start=start, times=times, points=points)
