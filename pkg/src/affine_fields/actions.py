"""Lie group elements, actions on R^n, and fundamental vector fields.

Three groups are covered: translations, the general linear group, and the
general affine group (semidirect product of the latter two, multiplication
(a1, t1)(a2, t2) = (a1 a2, a1 t2 + t1)).  A fixed catalog of left actions is
implemented:

* standard-linear        (a, x)      -> a x
* standard-translation   (t, x)      -> x + t
* standard-affine        ((a, t), x) -> a x + t
* exp-translation        (t, x)      -> x * exp(s . t)   for a fixed weight s
* det-weighted           (a, x)      -> a x (det a)^q    for a fixed power q

plus chart-conjugated local versions of any of these, acting through a chart
by forward / act / inverse.  For a tangent vector X at the identity, the
fundamental field at x is the derivative of g -> act(g, x) at the identity
contracted with X; it is computed both by central differences along the
group coordinates (matrix entries row-major, then translation entries) and
from the per-variant closed forms, and the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import Chart
from .fields import AffineField, evaluate
from .linalg import as_matrix, as_vector, augment_affine, mat_exp

TRANSLATION_GROUP = "translation"
GENERAL_LINEAR = "general-linear"
GENERAL_AFFINE = "general-affine"

_KINDS = (TRANSLATION_GROUP, GENERAL_LINEAR, GENERAL_AFFINE)

STANDARD_LINEAR = "standard-linear"
STANDARD_TRANSLATION = "standard-translation"
STANDARD_AFFINE = "standard-affine"
EXP_TRANSLATION = "exp-translation"
DET_WEIGHTED = "det-weighted"
CHART_CONJUGATED = "chart-conjugated"
# Negative control for axiom checks: (a, x) -> a x + x is not an action.
BROKEN_LINEAR = "broken-linear"

CATALOG_VARIANTS = (
    STANDARD_LINEAR,
    STANDARD_TRANSLATION,
    STANDARD_AFFINE,
    EXP_TRANSLATION,
    DET_WEIGHTED,
)

# Matrix parts closer to singular than this are rejected.
MIN_ABS_DET = 1e-12

_VARIANT_KIND = {
    STANDARD_LINEAR: GENERAL_LINEAR,
    STANDARD_TRANSLATION: TRANSLATION_GROUP,
    STANDARD_AFFINE: GENERAL_AFFINE,
    EXP_TRANSLATION: TRANSLATION_GROUP,
    DET_WEIGHTED: GENERAL_LINEAR,
    BROKEN_LINEAR: GENERAL_LINEAR,
}


@dataclass(frozen=True)
class GroupElement:
    """Element of the translation, general linear, or general affine group."""

    kind: str
    a: np.ndarray | None = None
    t: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        a = self.a
        t = self.t
        if self.kind == TRANSLATION_GROUP:
            if a is not None:
                raise ValueError("translation elements carry no matrix part")
            t = as_vector(t, "translation part")
        elif self.kind == GENERAL_LINEAR:
            if t is not None:
                raise ValueError("general-linear elements carry no translation part")
            a = as_matrix(a, "matrix part")
        else:
            a = as_matrix(a, "matrix part")
            t = as_vector(t, "translation part")
        if a is not None:
            if a.shape[0] != a.shape[1]:
                raise ValueError(f"matrix part must be square, got {a.shape}")
            if abs(np.linalg.det(a)) <= MIN_ABS_DET:
                raise ValueError("matrix part is singular")
            if t is not None and t.size != a.shape[0]:
                raise ValueError("matrix and translation parts disagree on dimension")
            a.flags.writeable = False
        if t is not None:
            t.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.t.size if self.t is not None else self.a.shape[0]

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.a is not None:
            out["a"] = self.a.tolist()
        if self.t is not None:
            out["t"] = self.t.tolist()
        return out

    @staticmethod
    def from_dict(data: dict) -> "GroupElement":
        return GroupElement(
            kind=data["kind"],
            a=np.asarray(data["a"], dtype=float) if "a" in data else None,
            t=np.asarray(data["t"], dtype=float) if "t" in data else None,
        )


def translation_element(t) -> GroupElement:
    return GroupElement(TRANSLATION_GROUP, t=as_vector(t))


def linear_element(a) -> GroupElement:
    return GroupElement(GENERAL_LINEAR, a=as_matrix(a))


def affine_element(a, t) -> GroupElement:
    return GroupElement(GENERAL_AFFINE, a=as_matrix(a), t=as_vector(t))


def identity_element(kind: str, n: int) -> GroupElement:
    if kind == TRANSLATION_GROUP:
        return translation_element(np.zeros(n))
    if kind == GENERAL_LINEAR:
        return linear_element(np.eye(n))
    if kind == GENERAL_AFFINE:
        return affine_element(np.eye(n), np.zeros(n))
    raise ValueError(f"unknown group kind {kind!r}")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g h (for the affine group: (a1 a2, a1 t2 + t1))."""
    if g.kind != h.kind:
        raise ValueError(f"cannot multiply {g.kind!r} by {h.kind!r}")
    if g.n != h.n:
        raise ValueError("dimension mismatch")
    if g.kind == TRANSLATION_GROUP:
        return translation_element(g.t + h.t)
    if g.kind == GENERAL_LINEAR:
        return linear_element(g.a @ h.a)
    return affine_element(g.a @ h.a, g.a @ h.t + g.t)


def inverse(g: GroupElement) -> GroupElement:
    if g.kind == TRANSLATION_GROUP:
        return translation_element(-g.t)
    if g.kind == GENERAL_LINEAR:
        return linear_element(np.linalg.inv(g.a))
    a_inv = np.linalg.inv(g.a)
    return affine_element(a_inv, -(a_inv @ g.t))


@dataclass(frozen=True)
class TangentAtIdentity:
    """Tangent vector at the group identity.

    X_mat holds the components along the matrix coordinates (zero for the
    translation group), X_vec those along the translation coordinates (zero
    for the general linear group).
    """

    kind: str
    X_mat: np.ndarray
    X_vec: np.ndarray

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        m = as_matrix(self.X_mat, "X_mat")
        v = as_vector(self.X_vec, "X_vec")
        if m.shape != (v.size, v.size):
            raise ValueError("X_mat and X_vec disagree on dimension")
        if self.kind == TRANSLATION_GROUP and np.any(m != 0.0):
            raise ValueError("translation tangents have zero matrix components")
        if self.kind == GENERAL_LINEAR and np.any(v != 0.0):
            raise ValueError("general-linear tangents have zero vector components")
        m.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "X_mat", m)
        object.__setattr__(self, "X_vec", v)

    @property
    def n(self) -> int:
        return self.X_vec.size

    def to_dict(self) -> dict:
        return {"X_mat": self.X_mat.tolist(), "X_vec": self.X_vec.tolist()}

    @staticmethod
    def from_dict(kind: str, data: dict) -> "TangentAtIdentity":
        n = None
        mat = data.get("X_mat")
        vec = data.get("X_vec")
        if vec is not None:
            n = len(vec)
        elif mat is not None:
            n = len(mat)
        if n is None:
            raise ValueError("tangent data needs X_mat or X_vec")
        return TangentAtIdentity(
            kind,
            np.zeros((n, n)) if mat is None else np.asarray(mat, dtype=float),
            np.zeros(n) if vec is None else np.asarray(vec, dtype=float),
        )


def translation_tangent(v) -> TangentAtIdentity:
    v = as_vector(v)
    return TangentAtIdentity(TRANSLATION_GROUP, np.zeros((v.size, v.size)), v)


def linear_tangent(m) -> TangentAtIdentity:
    m = as_matrix(m)
    return TangentAtIdentity(GENERAL_LINEAR, m, np.zeros(m.shape[0]))


def affine_tangent(m, v) -> TangentAtIdentity:
    return TangentAtIdentity(GENERAL_AFFINE, as_matrix(m), as_vector(v))


@dataclass(frozen=True)
class GroupAction:
    """A named left action from the catalog, possibly conjugated by a chart."""

    variant: str
    n: int
    s: np.ndarray | None = None
    q: int | None = None
    base: "GroupAction | None" = None
    chart: Chart | None = None

    def __post_init__(self):
        if self.variant == CHART_CONJUGATED:
            if self.base is None or self.chart is None:
                raise ValueError("chart-conjugated actions need a base and a chart")
            if self.base.variant == CHART_CONJUGATED:
                raise ValueError("base action must not itself be chart-conjugated")
            if self.base.n != self.n or self.chart.n != self.n:
                raise ValueError("base action, chart, and action dimensions differ")
            return
        if self.variant not in _VARIANT_KIND:
            raise ValueError(f"unknown action variant {self.variant!r}")
        if self.variant == EXP_TRANSLATION:
            s = as_vector(self.s, "weight vector")
            if s.size != self.n:
                raise ValueError("weight vector dimension mismatch")
            s.flags.writeable = False
            object.__setattr__(self, "s", s)
        elif self.s is not None:
            raise ValueError(f"variant {self.variant!r} takes no weight vector")
        if self.variant == DET_WEIGHTED:
            if self.q is None or self.q < 0 or int(self.q) != self.q:
                raise ValueError("det-weighted actions need a nonnegative integer q")
            object.__setattr__(self, "q", int(self.q))
        elif self.q is not None:
            raise ValueError(f"variant {self.variant!r} takes no power q")

    @property
    def group_kind(self) -> str:
        if self.variant == CHART_CONJUGATED:
            return self.base.group_kind
        return _VARIANT_KIND[self.variant]

    def describe(self) -> str:
        if self.variant == CHART_CONJUGATED:
            return f"{self.base.describe()} via chart {self.chart.name!r}"
        if self.variant == EXP_TRANSLATION:
            return f"{self.variant}(s={self.s.tolist()})"
        if self.variant == DET_WEIGHTED:
            return f"{self.variant}(q={self.q})"
        return self.variant


def standard_linear_action(n: int) -> GroupAction:
    return GroupAction(STANDARD_LINEAR, n)


def standard_translation_action(n: int) -> GroupAction:
    return GroupAction(STANDARD_TRANSLATION, n)


def standard_affine_action(n: int) -> GroupAction:
    return GroupAction(STANDARD_AFFINE, n)


def exp_translation_action(s) -> GroupAction:
    s = as_vector(s)
    return GroupAction(EXP_TRANSLATION, s.size, s=s)


def det_weighted_action(n: int, q: int) -> GroupAction:
    return GroupAction(DET_WEIGHTED, n, q=q)


def chart_conjugated_action(base: GroupAction, chart: Chart) -> GroupAction:
    return GroupAction(CHART_CONJUGATED, base.n, base=base, chart=chart)


def broken_linear_action(n: int) -> GroupAction:
    return GroupAction(BROKEN_LINEAR, n)


def catalog_actions(n: int, s=None, q: int = 1) -> list[GroupAction]:
    """One instance of each of the five catalog actions on R^n."""
    if s is None:
        s = np.ones(n)
    return [
        standard_linear_action(n),
        standard_translation_action(n),
        standard_affine_action(n),
        exp_translation_action(s),
        det_weighted_action(n, q),
    ]


def identity_of(action: GroupAction) -> GroupElement:
    return identity_element(action.group_kind, action.n)


def _require_kind(action: GroupAction, g: GroupElement):
    if g.kind != action.group_kind:
        raise ValueError(
            f"element of kind {g.kind!r} fed to a {action.group_kind!r} action"
        )
    if g.n != action.n:
        raise ValueError(f"element dimension {g.n} differs from action's {action.n}")


def act(action: GroupAction, g: GroupElement, x) -> np.ndarray:
    """Apply the left action of g to the point x."""
    _require_kind(action, g)
    variant = action.variant
    if variant == CHART_CONJUGATED:
        p = action.chart.require(x)
        image = act(action.base, g, action.chart.forward(p))
        return action.chart.inverse(image)
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.size != action.n:
        raise ValueError(f"point has dim {p.size}, action lives on R^{action.n}")
    if variant == STANDARD_LINEAR:
        return g.a @ p
    if variant == STANDARD_TRANSLATION:
        return p + g.t
    if variant == STANDARD_AFFINE:
        return g.a @ p + g.t
    if variant == EXP_TRANSLATION:
        return p * float(np.exp(np.dot(action.s, g.t)))
    if variant == DET_WEIGHTED:
        return (g.a @ p) * float(np.linalg.det(g.a)) ** action.q
    if variant == BROKEN_LINEAR:
        return g.a @ p + p
    raise ValueError(f"unknown action variant {variant!r}")  # pragma: no cover


def act_right(action: GroupAction, x, g: GroupElement) -> np.ndarray:
    """Right action; implemented for the standard translation action only,
    where it coincides with the left one point by point."""
    if action.variant != STANDARD_TRANSLATION:
        raise ValueError("right actions are implemented for standard-translation only")
    _require_kind(action, g)
    p = np.asarray(x, dtype=float).reshape(-1)
    return p + g.t


def _element_with_matrix(kind: str, a: np.ndarray, n: int) -> GroupElement:
    if kind == GENERAL_LINEAR:
        return GroupElement(GENERAL_LINEAR, a=a)
    return GroupElement(GENERAL_AFFINE, a=a, t=np.zeros(n))


def _element_with_vector(kind: str, t: np.ndarray, n: int) -> GroupElement:
    if kind == TRANSLATION_GROUP:
        return GroupElement(TRANSLATION_GROUP, t=t)
    return GroupElement(GENERAL_AFFINE, a=np.eye(n), t=t)


def _numeric_at_step(action, tangent, p, h, side):
    kind = action.group_kind
    n = action.n
    if side == "right":
        apply = lambda g: act_right(action, p, g)  # noqa: E731
    else:
        apply = lambda g: act(action, g, p)  # noqa: E731
    out = np.zeros(n)
    if kind in (GENERAL_LINEAR, GENERAL_AFFINE):
        for r in range(n):
            for c in range(n):
                comp = tangent.X_mat[r, c]
                if comp == 0.0:
                    continue
                plus = np.eye(n)
                plus[r, c] += h
                minus = np.eye(n)
                minus[r, c] -= h
                diff = apply(_element_with_matrix(kind, plus, n)) - apply(
                    _element_with_matrix(kind, minus, n)
                )
                out += comp * diff / (2.0 * h)
    if kind in (TRANSLATION_GROUP, GENERAL_AFFINE):
        for i in range(n):
            comp = tangent.X_vec[i]
            if comp == 0.0:
                continue
            step = np.zeros(n)
            step[i] = h
            diff = apply(_element_with_vector(kind, step, n)) - apply(
                _element_with_vector(kind, -step, n)
            )
            out += comp * diff / (2.0 * h)
    return out


def fundamental_field_numeric(
    action: GroupAction,
    tangent: TangentAtIdentity,
    x,
    h: float = 1e-6,
    side: str = "left",
    richardson: bool = False,
) -> np.ndarray:
    """Fundamental vector at x by central differences along group coordinates.

    Differentiates g -> act(g, x) at the identity along each matrix entry
    (row-major) and each translation entry, then contracts with the tangent
    components.  Perturbing the identity by h < 1 cannot leave the group.
    With ``richardson`` the h and h/2 estimates are extrapolated, which
    tightens the agreement with the analytic field for large points.
    """
    if h <= 0.0 or h >= 1.0:
        raise ValueError("step h must lie in (0, 1)")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if tangent.kind != action.group_kind:
        raise ValueError(
            f"tangent of kind {tangent.kind!r} fed to a {action.group_kind!r} action"
        )
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.size != action.n:
        raise ValueError(f"point has dim {p.size}, action lives on R^{action.n}")
    coarse = _numeric_at_step(action, tangent, p, h, side)
    if not richardson:
        return coarse
    fine = _numeric_at_step(action, tangent, p, h / 2.0, side)
    return (4.0 * fine - coarse) / 3.0


def fundamental_field_analytic(
    action: GroupAction, tangent: TangentAtIdentity
) -> AffineField:
    """Closed-form fundamental field of a catalog action.

    standard-linear (C = X_mat), standard-translation (B = X_vec),
    standard-affine (both), exp-translation (C = (X_vec . s) I), and
    det-weighted (C = X_mat + q trace(X_mat) I).  Chart-conjugated actions
    have no ambient closed form; see fundamental_field_chart.
    """
    if tangent.kind != action.group_kind:
        raise ValueError(
            f"tangent of kind {tangent.kind!r} fed to a {action.group_kind!r} action"
        )
    n = action.n
    variant = action.variant
    if variant == STANDARD_LINEAR:
        return AffineField(tangent.X_mat, np.zeros(n))
    if variant == STANDARD_TRANSLATION:
        return AffineField(np.zeros((n, n)), tangent.X_vec)
    if variant == STANDARD_AFFINE:
        return AffineField(tangent.X_mat, tangent.X_vec)
    if variant == EXP_TRANSLATION:
        rate = float(np.dot(tangent.X_vec, action.s))
        return AffineField(rate * np.eye(n), np.zeros(n))
    if variant == DET_WEIGHTED:
        c = tangent.X_mat + action.q * np.trace(tangent.X_mat) * np.eye(n)
        return AffineField(c, np.zeros(n))
    raise ValueError(f"no ambient closed form for variant {variant!r}")


def fundamental_field_chart(
    action: GroupAction, tangent: TangentAtIdentity, x
) -> np.ndarray:
    """Fundamental vector of a chart-conjugated action in ambient components.

    In the chart frame the field is the base action's closed form evaluated
    at the chart coordinates of x; the ambient components follow by solving
    against the chart's forward Jacobian.
    """
    if action.variant != CHART_CONJUGATED:
        raise ValueError("fundamental_field_chart needs a chart-conjugated action")
    chart = action.chart
    p = chart.require(x)
    base_field = fundamental_field_analytic(action.base, tangent)
    chart_components = evaluate(base_field, chart.forward(p))
    return np.linalg.solve(chart.jacobian(p), chart_components)


def tangent_for_field(action: GroupAction, field: AffineField) -> TangentAtIdentity:
    """Tangent vector whose fundamental field under the action is the field.

    This is the constructive direction of the bijections between field
    classes and fundamental fields: linear fields for standard-linear,
    constant for standard-translation, affine for standard-affine.  For the
    det-weighted action the matrix part is recovered by removing the trace
    feedback, X_mat = C - q / (1 + q n) trace(C) I; for exp-translation the
    field must be an isotropic scaling c I and any X_vec with X_vec . s = c
    works (the returned one is c s / (s . s)).
    """
    n = action.n
    if field.n != n:
        raise ValueError("field and action dimensions differ")
    c_norm = float(np.max(np.abs(field.C)))
    b_norm = float(np.max(np.abs(field.B)))
    variant = action.variant
    if variant == STANDARD_LINEAR:
        if b_norm > 1e-12:
            raise ValueError("standard-linear fundamental fields are linear")
        return linear_tangent(field.C)
    if variant == STANDARD_TRANSLATION:
        if c_norm > 1e-12:
            raise ValueError("standard-translation fundamental fields are constant")
        return translation_tangent(field.B)
    if variant == STANDARD_AFFINE:
        return affine_tangent(field.C, field.B)
    if variant == DET_WEIGHTED:
        if b_norm > 1e-12:
            raise ValueError("det-weighted fundamental fields are linear")
        q = action.q
        x_mat = field.C - (q / (1.0 + q * n)) * np.trace(field.C) * np.eye(n)
        return linear_tangent(x_mat)
    if variant == EXP_TRANSLATION:
        if b_norm > 1e-12:
            raise ValueError("exp-translation fundamental fields are linear")
        rate = float(np.trace(field.C)) / n
        if np.max(np.abs(field.C - rate * np.eye(n))) > 1e-10 * (1.0 + abs(rate)):
            raise ValueError(
                "exp-translation fundamental fields are isotropic scalings"
            )
        s = action.s
        ss = float(np.dot(s, s))
        if ss == 0.0:
            raise ValueError("weight vector is zero; only the zero field is reachable")
        return translation_tangent((rate / ss) * s)
    raise ValueError(f"no tangent recovery for variant {variant!r}")


def one_parameter_subgroup(
    action: GroupAction, tangent: TangentAtIdentity, t: float
) -> GroupElement:
    """exp(t X) in the action's group; the orbit map t -> act(exp(t X), x)
    is the flow of the fundamental field through x."""
    if tangent.kind != action.group_kind:
        raise ValueError("tangent kind does not match the action's group")
    kind = action.group_kind
    if kind == TRANSLATION_GROUP:
        return translation_element(t * tangent.X_vec)
    if kind == GENERAL_LINEAR:
        return linear_element(mat_exp(t * tangent.X_mat))
    n = action.n
    big = mat_exp(t * augment_affine(tangent.X_mat, tangent.X_vec))
    return affine_element(big[:n, :n], big[:n, n])


def random_element(
    action: GroupAction, rng: np.random.Generator, scale: float | None = None
) -> GroupElement:
    """Random element for axiom sampling.

    Chart-conjugated actions are only local, so their elements stay close to
    the identity; global actions use a wider spread.  Matrix parts are
    resampled until comfortably invertible.
    """
    if scale is None:
        scale = 0.05 if action.variant == CHART_CONJUGATED else 0.35
    kind = action.group_kind
    n = action.n
    t = rng.uniform(-scale, scale, size=n) if kind != GENERAL_LINEAR else None
    a = None
    if kind != TRANSLATION_GROUP:
        for _ in range(100):
            a = np.eye(n) + rng.uniform(-scale, scale, size=(n, n))
            if abs(np.linalg.det(a)) > 1e-6:
                break
        else:  # pragma: no cover - a tiny perturbation of I is invertible
            raise RuntimeError("failed to sample an invertible matrix")
    if kind == TRANSLATION_GROUP:
        return translation_element(t)
    if kind == GENERAL_LINEAR:
        return linear_element(a)
    return affine_element(a, t)


@dataclass(frozen=True)
class ActionAxiomReport:
    """Maximum identity and composition defects over sampled triples."""

    action: str
    samples: int
    max_identity_defect: float
    max_composition_defect: float
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return (
            self.max_identity_defect <= self.tol
            and self.max_composition_defect <= self.tol
        )

    def to_dict(self) -> dict:
        return {
            "action": self.action,
            "samples": self.samples,
            "max_identity_defect": self.max_identity_defect,
            "max_composition_defect": self.max_composition_defect,
            "tol": self.tol,
            "passed": self.passed,
        }


def check_action_axioms(
    action: GroupAction, samples: int, seed: int = 0, tol: float = 1e-9
) -> ActionAxiomReport:
    """Sample (g1, g2, x) triples and measure the defects of act(e, x) = x
    and act(g1 g2, x) = act(g1, act(g2, x)), relative to 1 + |x|."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    e = identity_of(action)
    max_id = 0.0
    max_comp = 0.0
    for _ in range(samples):
        if action.variant == CHART_CONJUGATED:
            x = action.chart.sample(rng)
        else:
            x = rng.uniform(-2.0, 2.0, size=action.n)
        g1 = random_element(action, rng)
        g2 = random_element(action, rng)
        scale = 1.0 + float(np.linalg.norm(x))
        max_id = max(max_id, float(np.linalg.norm(act(action, e, x) - x)) / scale)
        direct = act(action, multiply(g1, g2), x)
        chained = act(action, g1, act(action, g2, x))
        max_comp = max(max_comp, float(np.linalg.norm(direct - chained)) / scale)
    return ActionAxiomReport(
        action=action.describe(),
        samples=samples,
        max_identity_defect=max_id,
        max_composition_defect=max_comp,
        tol=tol,
    )
