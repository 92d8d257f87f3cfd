"""Cross-module validation suite.

Each check pits one computational route against an independent one (closed
forms against RK4 integration, matrix brackets against index formulas,
difference quotients against analytic fields) at a fixed tolerance.  The CLI
``validate`` command and the acceptance tests both run these.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import actions as ga
from .charts import lambert_chart, lambert_w
from .fields import (
    AffineField,
    GeneratorIndex,
    all_generators,
    evaluate,
    evaluate_many,
    generator,
    zero_field,
)
from .flows import (
    AUGMENTED_EXPONENTIAL,
    SHIFTED_EXPONENTIAL,
    FlowMap,
    flow_at,
    group_law_defect,
    make_flow,
)
from .invariants import (
    ScalarField,
    constant_field_bundle,
    directional_derivative,
    planar_affine_family,
    straightened_frame_flow,
)
from .linalg import solve_linear
from .oracle import OdeProblem, integrate


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_affine_field(rng, n, c_scale=2.0, b_scale=2.0) -> AffineField:
    return AffineField(
        rng.uniform(-c_scale, c_scale, size=(n, n)),
        rng.uniform(-b_scale, b_scale, size=n),
    )


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def check_flow_vs_oracle(seed: int = 42) -> CheckResult:
    """500 random affine fields, closed-form flow at t=1 against RK4 with
    step 1e-3 from 3 random starts each; bound 1e-6 * (1 + |x|)."""
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        field = _random_affine_field(rng, n)
        flow = make_flow(field)
        starts = rng.uniform(-2.0, 2.0, size=(3, n))

        def rhs(z, field=field, n=n):
            return evaluate_many(field, z.reshape(3, n)).ravel()

        ends = integrate(OdeProblem(rhs, starts.ravel(), 1.0, 1e-3)).reshape(3, n)
        for x, end in zip(starts, ends):
            defect = np.linalg.norm(flow_at(flow, 1.0, x) - end)
            rel = defect / (1.0 + np.linalg.norm(x))
            worst = max(worst, rel)
    return CheckResult(
        "closed-form-vs-rk4",
        worst <= 1e-6,
        f"worst relative defect {worst:.3e} (bound 1e-06)",
    )


def check_group_law(seed: int = 42) -> CheckResult:
    """Flow composition flow(s+t) = flow(s) o flow(t) on 500 random fields,
    s, t in [-1, 1]; bound 1e-8 * (1 + |x|)."""
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        field = _random_affine_field(rng, n)
        flow = make_flow(field)
        for _ in range(3):
            s, t = rng.uniform(-1.0, 1.0, size=2)
            x = rng.uniform(-2.0, 2.0, size=n)
            rel = group_law_defect(flow, s, t, x) / (1.0 + np.linalg.norm(x))
            worst = max(worst, rel)
    return CheckResult(
        "flow-group-law",
        worst <= 1e-8,
        f"worst relative defect {worst:.3e} (bound 1e-08)",
    )


def _field_combination(terms, n) -> AffineField:
    """Signed sum of generator fields given as (sign, GeneratorIndex)."""
    c = np.zeros((n, n))
    b = np.zeros(n)
    for sign, g in terms:
        f = generator(g, n)
        c += sign * f.C
        b += sign * f.B
    return AffineField(c, b)


def expected_generator_bracket(
    g1: GeneratorIndex, g2: GeneratorIndex, n: int
) -> AffineField:
    """Bracket of two generators straight from the index relations.

    Constant generators commute; a constant against a linear one gives
    [d_i, u^j d_k] = delta(i, j) d_k; two linear ones give
    [u^b d_a, u^d d_c] = delta(a, d) u^b d_c - delta(c, b) u^d d_a.
    This route never multiplies matrices, so it is an independent oracle for
    the bracket implementation.
    """
    if g1.is_constant and g2.is_constant:
        return zero_field(n)
    if g1.is_constant:
        if g1.i == g2.j:
            return _field_combination([(1.0, GeneratorIndex(g2.i))], n)
        return zero_field(n)
    if g2.is_constant:
        if g2.i == g1.j:
            return _field_combination([(-1.0, GeneratorIndex(g1.i))], n)
        return zero_field(n)
    terms = []
    if g1.i == g2.j:
        terms.append((1.0, GeneratorIndex(g2.i, g1.j)))
    if g2.i == g1.j:
        terms.append((-1.0, GeneratorIndex(g1.i, g2.j)))
    return _field_combination(terms, n)


def generator_bracket_table(n: int):
    """Brackets of all unordered generator pairs (repetition included).

    Entries are (label1, label2, bracket field) over the n constant and n^2
    linear generators, so dimension 4 yields the full 210-pair table.
    """
    from .fields import bracket

    gens = all_generators(n)
    table = []
    for p in range(len(gens)):
        for r in range(p, len(gens)):
            g1, f1 = gens[p]
            g2, f2 = gens[r]
            table.append((g1, g2, bracket(f1, f2)))
    return table


def check_structure_constants() -> CheckResult:
    """All generator bracket pairs for n <= 4 match the index relations
    exactly, with entries in {0, +-1}."""
    checked = 0
    table_size_n4 = 0
    for n in range(1, 5):
        for g1, g2, got in generator_bracket_table(n):
            want = expected_generator_bracket(g1, g2, n)
            entries = np.concatenate([got.C.ravel(), got.B.ravel()])
            if not np.all(np.isin(entries, (-1.0, 0.0, 1.0))):
                return CheckResult(
                    "bracket-structure-constants",
                    False,
                    f"non-unit entry in [{g1}, {g2}] for n={n}",
                )
            if not (np.array_equal(got.C, want.C) and np.array_equal(got.B, want.B)):
                return CheckResult(
                    "bracket-structure-constants",
                    False,
                    f"[{g1}, {g2}] mismatch for n={n}",
                )
            checked += 1
            if n == 4:
                table_size_n4 += 1
    return CheckResult(
        "bracket-structure-constants",
        True,
        f"{checked} unordered pairs exact (n=4 table: {table_size_n4} pairs)",
    )


def check_planar_family(seed: int = 42) -> CheckResult:
    """End-to-end run of the worked planar family with (alpha, beta, gamma)
    = (1, 1, 0): flow value, defining equations, Jacobian determinant, and
    the straightened flow."""
    rng = _rng(seed, 4)
    field, bundle = planar_affine_family(1.0, 1.0, 0.0)
    flow = make_flow(field)
    problems = []

    image = flow_at(flow, 2.0, np.zeros(2))
    if np.max(np.abs(image - np.array([2.0, 4.0]))) > 1e-9:
        problems.append(f"flow(2, origin) = {image.tolist()} not (2, 4)")

    worst_s = 0.0
    worst_i = 0.0
    worst_jac = 0.0
    for _ in range(100):
        x = rng.uniform(-2.0, 2.0, size=2)
        worst_s = max(worst_s, abs(directional_derivative(field, bundle.S, x) - 1.0))
        worst_i = max(
            worst_i, abs(directional_derivative(field, bundle.invariants[0], x))
        )
        jac = np.stack([bundle.S.gradient(x), bundle.invariants[0].gradient(x)])
        worst_jac = max(worst_jac, abs(np.linalg.det(jac) - 1.0))
    if worst_s > 1e-9:
        problems.append(f"max |X(S)-1| = {worst_s:.3e}")
    if worst_i > 1e-9:
        problems.append(f"max |X(I)| = {worst_i:.3e}")
    if worst_jac > 1e-9:
        problems.append(f"max |det J - 1| = {worst_jac:.3e}")

    for _ in range(10):
        b, c, t = rng.uniform(-2.0, 2.0, size=3)
        moved = straightened_frame_flow(bundle, t, np.array([b, c]))
        if moved[0] != b + t or moved[1] != c:
            problems.append("straightened flow is not (b + t, c)")
            break

    if problems:
        return CheckResult("planar-family-end-to-end", False, "; ".join(problems))
    return CheckResult(
        "planar-family-end-to-end",
        True,
        f"defects: S {worst_s:.2e}, I {worst_i:.2e}, det {worst_jac:.2e} (bound 1e-09)",
    )


def _random_tangent(rng, kind: str, n: int) -> ga.TangentAtIdentity:
    mat = rng.uniform(-1.0, 1.0, size=(n, n))
    vec = rng.uniform(-1.0, 1.0, size=n)
    if kind == ga.TRANSLATION_GROUP:
        return ga.translation_tangent(vec)
    if kind == ga.GENERAL_LINEAR:
        return ga.linear_tangent(mat)
    return ga.affine_tangent(mat, vec)


def check_fundamental_agreement(seed: int = 42) -> CheckResult:
    """Difference-quotient fundamental fields against the closed forms for
    all five catalog actions, 100 random (X, x) pairs each; bound
    1e-5 * (1 + |x|)."""
    rng = _rng(seed, 5)
    worst = 0.0
    for variant in ga.CATALOG_VARIANTS:
        for _ in range(100):
            n = int(rng.integers(1, 4))
            if variant == ga.EXP_TRANSLATION:
                action = ga.exp_translation_action(rng.uniform(-1.5, 1.5, size=n))
            elif variant == ga.DET_WEIGHTED:
                action = ga.det_weighted_action(n, int(rng.integers(0, 4)))
            else:
                action = ga.GroupAction(variant, n)
            tangent = _random_tangent(rng, action.group_kind, n)
            x = rng.uniform(-2.0, 2.0, size=n)
            numeric = ga.fundamental_field_numeric(action, tangent, x)
            analytic = evaluate(ga.fundamental_field_analytic(action, tangent), x)
            rel = np.linalg.norm(numeric - analytic) / (1.0 + np.linalg.norm(x))
            worst = max(worst, rel)
    return CheckResult(
        "fundamental-field-agreement",
        worst <= 1e-5,
        f"worst relative defect {worst:.3e} (bound 1e-05)",
    )


def check_field_tangent_roundtrip(seed: int = 42) -> CheckResult:
    """Field -> tangent -> fundamental field is the identity for the linear,
    constant, and affine bijections, and the det-weighted trace-removal
    inverse round-trips for q in 0..3, n in 1..4; bound 1e-12."""
    rng = _rng(seed, 6)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 5))
        c = rng.uniform(-2.0, 2.0, size=(n, n))
        b = rng.uniform(-2.0, 2.0, size=n)
        cases = [
            (ga.standard_linear_action(n), AffineField(c, np.zeros(n))),
            (ga.standard_translation_action(n), AffineField(np.zeros((n, n)), b)),
            (ga.standard_affine_action(n), AffineField(c, b)),
        ]
        for action, field in cases:
            back = ga.fundamental_field_analytic(
                action, ga.tangent_for_field(action, field)
            )
            worst = max(
                worst,
                float(np.max(np.abs(back.C - field.C))),
                float(np.max(np.abs(back.B - field.B))),
            )
    for n in range(1, 5):
        for q in range(4):
            action = ga.det_weighted_action(n, q)
            for _ in range(5):
                field = AffineField(
                    rng.uniform(-2.0, 2.0, size=(n, n)), np.zeros(n)
                )
                back = ga.fundamental_field_analytic(
                    action, ga.tangent_for_field(action, field)
                )
                worst = max(worst, float(np.max(np.abs(back.C - field.C))))
    return CheckResult(
        "field-tangent-round-trip",
        worst <= 1e-12,
        f"worst round-trip defect {worst:.3e} (bound 1e-12)",
    )


def check_chart_conjugation() -> CheckResult:
    """The scaling field in the lambert chart pulls back to u / (1 + u) in
    ambient coordinates; both the analytic-chart and difference-quotient
    routes must land within 1e-6, and the Newton inversion residual must
    stay at or below 1e-12."""
    chart = lambert_chart()
    action = ga.chart_conjugated_action(ga.standard_linear_action(1), chart)
    tangent = ga.linear_tangent(np.array([[1.0]]))
    worst_field = 0.0
    for u in (-0.5, 0.5, 1.0, 2.0):
        want = u / (1.0 + u)
        via_chart = ga.fundamental_field_chart(action, tangent, np.array([u]))[0]
        via_numeric = ga.fundamental_field_numeric(action, tangent, np.array([u]))[0]
        worst_field = max(
            worst_field, abs(via_chart - want), abs(via_numeric - want)
        )
    worst_residual = 0.0
    for w in (-0.36, -0.2, 0.0, 0.5, 1.0, 5.0, 20.0, 60.0):
        u = lambert_w(w)
        worst_residual = max(worst_residual, abs(u * np.exp(u) - w))
    passed = worst_field <= 1e-6 and worst_residual <= 1e-12
    return CheckResult(
        "chart-conjugation",
        passed,
        f"worst field defect {worst_field:.3e} (bound 1e-06), "
        f"worst Newton residual {worst_residual:.3e} (bound 1e-12)",
    )


def _random_reshaping(rng, m: int) -> ScalarField:
    """Nontrivial C^1 function of m slots with an analytic gradient."""
    amp_sin = rng.uniform(-1.0, 1.0, size=m)
    amp_sq = rng.uniform(-0.5, 0.5, size=m)
    amp_lin = rng.uniform(-1.0, 1.0, size=m)

    def fn(xi):
        return float(
            np.dot(amp_sin, np.sin(xi))
            + np.dot(amp_sq, xi**2)
            + np.dot(amp_lin, xi)
        )

    def grad(xi):
        return amp_sin * np.cos(xi) + 2.0 * amp_sq * xi + amp_lin

    return ScalarField(m, fn, grad=grad)


def check_invariant_flow_constancy(seed: int = 42) -> CheckResult:
    """100 random constant-field bundles with nontrivial reshapings: along
    the flow, invariants stay fixed and the canonical parameter advances by
    exactly t, to 1e-7, for t in {-1, -0.5, 0.5, 1}."""
    rng = _rng(seed, 8)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        b = rng.uniform(0.3, 2.0, size=n) * rng.choice([-1.0, 1.0], size=n)
        bundle = constant_field_bundle(
            b, F=_random_reshaping(rng, n - 1), G=_random_reshaping(rng, n - 1)
        )
        flow = make_flow(bundle.field)
        x = rng.uniform(-2.0, 2.0, size=n)
        s0 = bundle.S.value(x)
        i0 = bundle.invariants[0].value(x)
        for t in (-1.0, -0.5, 0.5, 1.0):
            moved = flow_at(flow, t, x)
            worst = max(
                worst,
                abs(bundle.S.value(moved) - s0 - t),
                abs(bundle.invariants[0].value(moved) - i0),
            )
    return CheckResult(
        "invariant-flow-constancy",
        worst <= 1e-7,
        f"worst defect {worst:.3e} (bound 1e-07)",
    )


def check_rk4_order(seed: int = 42) -> CheckResult:
    """Halving the RK4 step against the closed-form flow must show fourth
    order: measured exponent >= 3.7 on 20 random affine fields."""
    rng = _rng(seed, 9)
    worst_exponent = np.inf
    for _ in range(20):
        n = int(rng.integers(2, 5))
        field = _random_affine_field(rng, n)
        flow = make_flow(field)
        x = rng.uniform(-2.0, 2.0, size=n)
        reference = flow_at(flow, 1.0, x)

        def rhs(z, field=field):
            return evaluate(field, z)

        errors = []
        for step in (0.1, 0.05):
            end = integrate(OdeProblem(rhs, x, 1.0, step))
            errors.append(np.linalg.norm(end - reference))
        if errors[1] == 0.0:
            continue
        exponent = float(np.log2(errors[0] / errors[1]))
        worst_exponent = min(worst_exponent, exponent)
    return CheckResult(
        "rk4-convergence-order",
        worst_exponent >= 3.7,
        f"smallest measured exponent {worst_exponent:.3f} (bound 3.7)",
    )


def _singular_matrix(rng, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Random rank n-1 matrix plus a unit vector spanning its null space."""
    a = rng.uniform(-2.0, 2.0, size=(n, n))
    u, sigma, vt = np.linalg.svd(a)
    sigma = sigma.copy()
    sigma[-1] = 0.0
    return (u * sigma) @ vt, vt[-1]


def check_degenerate_flows(seed: int = 42) -> CheckResult:
    """Singular-matrix fields: when a fixed point exists but is not unique,
    the flow must not depend on which one is used (1e-10); when none exists,
    the homogeneous-embedding flow must match RK4 (1e-6)."""
    rng = _rng(seed, 10)
    worst_pair = 0.0
    worst_oracle = 0.0

    produced = 0
    while produced < 50:
        n = int(rng.integers(2, 5))
        c, null_vec = _singular_matrix(rng, n)
        anchor = rng.uniform(-2.0, 2.0, size=n)
        b = -(c @ anchor)
        if np.max(np.abs(b)) < 0.1:
            continue
        field = AffineField(c, b)
        u0, _ = solve_linear(c, -b)
        if u0 is None:
            continue
        flow_a = FlowMap(field, SHIFTED_EXPONENTIAL, fixed_point=u0)
        flow_b = FlowMap(field, SHIFTED_EXPONENTIAL, fixed_point=u0 + null_vec)
        for _ in range(3):
            t = rng.uniform(-1.0, 1.0)
            x = rng.uniform(-2.0, 2.0, size=n)
            worst_pair = max(
                worst_pair,
                float(np.linalg.norm(flow_at(flow_a, t, x) - flow_at(flow_b, t, x))),
            )
        produced += 1

    produced = 0
    while produced < 50:
        n = int(rng.integers(2, 5))
        c, _ = _singular_matrix(rng, n)
        left_null = np.linalg.svd(c)[0][:, -1]
        b = rng.uniform(-1.0, 1.0, size=n) + left_null * rng.uniform(0.5, 1.5)
        field = AffineField(c, b)
        if solve_linear(c, -b)[0] is not None:
            continue
        flow = make_flow(field)
        if flow.form != AUGMENTED_EXPONENTIAL:
            return CheckResult(
                "degenerate-flow-consistency",
                False,
                "unsolvable shift equation did not select the augmented form",
            )
        x = rng.uniform(-2.0, 2.0, size=n)

        def rhs(z, field=field):
            return evaluate(field, z)

        end = integrate(OdeProblem(rhs, x, 1.0, 1e-3))
        worst_oracle = max(
            worst_oracle, float(np.linalg.norm(flow_at(flow, 1.0, x) - end))
        )
        produced += 1

    passed = worst_pair <= 1e-10 and worst_oracle <= 1e-6
    return CheckResult(
        "degenerate-flow-consistency",
        passed,
        f"worst fixed-point-choice defect {worst_pair:.3e} (bound 1e-10), "
        f"worst oracle defect {worst_oracle:.3e} (bound 1e-06)",
    )


ALL_CHECKS = (
    check_flow_vs_oracle,
    check_group_law,
    check_structure_constants,
    check_planar_family,
    check_fundamental_agreement,
    check_field_tangent_roundtrip,
    check_chart_conjugation,
    check_invariant_flow_constancy,
    check_rk4_order,
    check_degenerate_flows,
)


def run_all(seed: int = 42) -> list[CheckResult]:
    results = []
    for fn in ALL_CHECKS:
        if "seed" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
            results.append(fn(seed=seed))
        else:
            results.append(fn())
    return results
