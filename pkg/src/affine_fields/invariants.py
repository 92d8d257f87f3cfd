"""Canonical parameters and invariants of vector fields.

A canonical parameter S satisfies X(S) = 1 and an invariant I satisfies
X(I) = 0, where X(f) is the directional derivative of f along the field.
The module constructs these functions for constant fields and for a worked
planar affine family, and numerically verifies user-supplied candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fields import AffineField, evaluate
from .linalg import rank

# Step scale for the central-difference gradient fallback.
FD_STEP = 1e-6


class DegenerateFieldError(ValueError):
    """The zero field admits no canonical parameter: X(S) = 1 is unsatisfiable."""


@dataclass(frozen=True)
class ScalarField:
    """Smooth function R^n -> R with an optional analytic gradient.

    When ``grad`` is omitted, gradients fall back to central finite
    differences with per-coordinate step FD_STEP * (1 + |x_i|).
    """

    n: int
    fn: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None

    def value(self, x) -> float:
        p = np.asarray(x, dtype=float).reshape(-1)
        if p.size != self.n:
            raise ValueError(f"point has dim {p.size}, expected {self.n}")
        return float(self.fn(p))

    def gradient(self, x) -> np.ndarray:
        p = np.asarray(x, dtype=float).reshape(-1)
        if p.size != self.n:
            raise ValueError(f"point has dim {p.size}, expected {self.n}")
        if self.grad is not None:
            return np.asarray(self.grad(p), dtype=float).reshape(-1)
        out = np.empty(self.n)
        for i in range(self.n):
            h = FD_STEP * (1.0 + abs(p[i]))
            up = p.copy()
            down = p.copy()
            up[i] += h
            down[i] -= h
            out[i] = (self.fn(up) - self.fn(down)) / (2.0 * h)
        return out


def directional_derivative(field: AffineField, f: ScalarField, x) -> float:
    """X(f) at x: the gradient of f contracted with the field's components."""
    if f.n != field.n:
        raise ValueError(f"scalar field on R^{f.n}, vector field on R^{field.n}")
    return float(np.dot(f.gradient(x), evaluate(field, x)))


@dataclass(frozen=True)
class InvariantBundle:
    """A field with a canonical parameter and up to n - 1 invariants."""

    field: AffineField
    S: ScalarField
    invariants: tuple[ScalarField, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariants", tuple(self.invariants))
        n = self.field.n
        if self.S.n != n or any(f.n != n for f in self.invariants):
            raise ValueError("bundle functions must live on the field's space")
        if len(self.invariants) > max(n - 1, 0):
            raise ValueError(f"at most {n - 1} invariants for dimension {n}")


def _zero_scalar(n: int) -> ScalarField:
    return ScalarField(n, lambda xi: 0.0, grad=lambda xi: np.zeros(n))


def constant_field_bundle(
    b, F: ScalarField | None = None, G: ScalarField | Sequence[ScalarField] | None = None
) -> InvariantBundle:
    """Canonical parameter and invariants of the constant field with components b.

    With pivot component b_p (the first coordinate, or the largest |b_i|
    when the first vanishes), the combinations xi_k = x_k - x_p b_k / b_p
    for k != p are invariants and x_p / b_p is a canonical parameter.  Any
    C^1 reshaping F of the xi's may be added to the parameter, and each
    supplied G composes with the xi's to give an invariant.  Coordinates
    whose b_k vanishes enter the xi's untouched.
    """
    vec = np.asarray(b, dtype=float).reshape(-1)
    n = vec.size
    if n == 0:
        raise DegenerateFieldError("constant field is zero; no canonical parameter")
    pivot = 0 if vec[0] != 0.0 else int(np.argmax(np.abs(vec)))
    if abs(vec[pivot]) == 0.0:
        raise DegenerateFieldError("constant field is zero; no canonical parameter")
    others = [k for k in range(n) if k != pivot]
    if F is None:
        F = _zero_scalar(n - 1)
    if G is None:
        gs: tuple[ScalarField, ...] = ()
    elif isinstance(G, ScalarField):
        gs = (G,)
    else:
        gs = tuple(G)
    if F.n != n - 1 or any(g.n != n - 1 for g in gs):
        raise ValueError(f"F and G must live on R^{n - 1}")

    bp = vec[pivot]
    ratios = vec[others] / bp

    def xi(p: np.ndarray) -> np.ndarray:
        return p[others] - p[pivot] * ratios

    def lift_grad(inner_grad: np.ndarray, pivot_term: float) -> np.ndarray:
        g = np.zeros(n)
        g[others] = inner_grad
        g[pivot] = pivot_term - float(np.dot(inner_grad, ratios))
        return g

    def s_fn(p: np.ndarray) -> float:
        return p[pivot] / bp + F.value(xi(p))

    def s_grad(p: np.ndarray) -> np.ndarray:
        return lift_grad(F.gradient(xi(p)), 1.0 / bp)

    def make_invariant(g: ScalarField) -> ScalarField:
        def i_fn(p: np.ndarray) -> float:
            return g.value(xi(p))

        def i_grad(p: np.ndarray) -> np.ndarray:
            return lift_grad(g.gradient(xi(p)), 0.0)

        return ScalarField(n, i_fn, grad=i_grad)

    field = AffineField(np.zeros((n, n)), vec)
    s = ScalarField(n, s_fn, grad=s_grad)
    return InvariantBundle(field, s, tuple(make_invariant(g) for g in gs))


def planar_affine_family(alpha: float, beta: float, gamma: float):
    """Worked planar family X = alpha d/du + (2 beta u + gamma) d/dv.

    Returns the field together with a verified bundle: canonical parameter
    S = u / alpha and invariant I = alpha v - beta u^2 - gamma u.  Requires
    alpha != 0.  In the (S, I) coordinates the flow is the unit translation
    of the first slot.
    """
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    field = AffineField(
        np.array([[0.0, 0.0], [2.0 * beta, 0.0]]),
        np.array([alpha, gamma]),
    )
    s = ScalarField(
        2,
        lambda p: p[0] / alpha,
        grad=lambda p: np.array([1.0 / alpha, 0.0]),
    )
    inv = ScalarField(
        2,
        lambda p: alpha * p[1] - beta * p[0] ** 2 - gamma * p[0],
        grad=lambda p: np.array([-2.0 * beta * p[0] - gamma, alpha]),
    )
    return field, InvariantBundle(field, s, (inv,))


def bundle_coordinates(bundle: InvariantBundle, x) -> np.ndarray:
    """The point x expressed as (S(x), I_1(x), ..., I_k(x))."""
    return np.array(
        [bundle.S.value(x)] + [f.value(x) for f in bundle.invariants]
    )


def straightened_frame_flow(bundle: InvariantBundle, t: float, coords) -> np.ndarray:
    """Flow in bundle coordinates: the parameter slot shifts by t, the
    invariant slots stay put.  Assumes the bundle passed verification with
    jacobian_ok, i.e. its functions form a local coordinate system."""
    c = np.asarray(coords, dtype=float).reshape(-1)
    if c.size != 1 + len(bundle.invariants):
        raise ValueError(
            f"coords has dim {c.size}, bundle supplies {1 + len(bundle.invariants)}"
        )
    out = c.copy()
    out[0] += t
    return out


@dataclass(frozen=True)
class VerificationReport:
    """Defect maxima from sampling a bundle against its defining equations."""

    sample_count: int
    tol: float
    max_parameter_defect: float
    invariant_defects: tuple[float, ...]
    jacobian_ok: bool

    @property
    def max_invariant_defect(self) -> float:
        return max(self.invariant_defects, default=0.0)

    @property
    def passed(self) -> bool:
        return (
            self.max_parameter_defect <= self.tol
            and self.max_invariant_defect <= self.tol
            and self.jacobian_ok
        )

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "tol": self.tol,
            "max_parameter_defect": self.max_parameter_defect,
            "invariant_defects": list(self.invariant_defects),
            "max_invariant_defect": self.max_invariant_defect,
            "jacobian_ok": self.jacobian_ok,
            "passed": self.passed,
        }


def sample_regular_points(
    field: AffineField,
    count: int,
    rng: np.random.Generator,
    box: float = 2.0,
    exclusion: float = 1e-3,
) -> np.ndarray:
    """Uniform samples from [-box, box]^n, skipping points where the field
    nearly vanishes (verification is meaningless at irregular points)."""
    points = np.empty((count, field.n))
    produced = 0
    attempts = 0
    while produced < count:
        attempts += 1
        if attempts > 1000 * count:
            raise RuntimeError("could not sample away from irregular points")
        x = rng.uniform(-box, box, size=field.n)
        if np.linalg.norm(evaluate(field, x)) < exclusion:
            continue
        points[produced] = x
        produced += 1
    return points


def verify_bundle(
    bundle: InvariantBundle,
    sample_count: int = 100,
    tol: float = 1e-8,
    box: float = 2.0,
    seed: int = 0,
) -> VerificationReport:
    """Sample the defining equations X(S) = 1 and X(I) = 0 and test that the
    bundle functions have a full-rank Jacobian (a genuine local coordinate
    system needs n independent functions, so bundles with fewer than n - 1
    invariants report jacobian_ok = False)."""
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    field = bundle.field
    n = field.n
    points = sample_regular_points(field, sample_count, rng, box=box)

    max_s = 0.0
    max_i = [0.0] * len(bundle.invariants)
    jacobian_ok = True
    for x in points:
        max_s = max(max_s, abs(directional_derivative(field, bundle.S, x) - 1.0))
        rows = [bundle.S.gradient(x)]
        for k, f in enumerate(bundle.invariants):
            max_i[k] = max(max_i[k], abs(directional_derivative(field, f, x)))
            rows.append(f.gradient(x))
        if rank(np.stack(rows)) < n:
            jacobian_ok = False
    return VerificationReport(
        sample_count=sample_count,
        tol=tol,
        max_parameter_defect=max_s,
        invariant_defects=tuple(max_i),
        jacobian_ok=jacobian_ok,
    )
