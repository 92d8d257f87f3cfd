"""Command-line interface: JSON in, JSON/CSV out.

Commands
--------
flow                image of a point under the time-t flow of a field
orbit               CSV trajectory of a point on a uniform time grid
bracket             Lie bracket of two fields
fundamental         closed-form fundamental field of a catalog action
verify-invariants   defect report for a canonical-parameter bundle
check-action        action-axiom defect report
validate            full cross-module validation suite

Exit codes: 0 success, 1 validation failure, 2 input error.  Floats are
printed in shortest round-trip decimal form so identical inputs give
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import actions as ga
from .charts import get_chart
from .fields import AffineField, bracket
from .flows import flow_at, make_flow, orbit
from .invariants import (
    InvariantBundle,
    ScalarField,
    constant_field_bundle,
    planar_affine_family,
    verify_bundle,
)
from .validate import run_all


class InputError(ValueError):
    """Bad file, flag, or schema content; maps to exit code 2."""


def fmt_float(value: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing .0"""
    r = repr(float(value))
    return r[:-2] if r.endswith(".0") else r


def _fmt_vector(vec) -> str:
    return " ".join(fmt_float(v) for v in np.asarray(vec).ravel())


def _load_json(path: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_field(path: str) -> AffineField:
    data = _load_json(path)
    try:
        return AffineField.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}: {exc}") from exc


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _cmd_flow(args) -> int:
    field = _load_field(args.field)
    point = _parse_point(args.point)
    image = flow_at(make_flow(field), args.t, point)
    if args.format == "json":
        _print_json({"t": args.t, "point": point.tolist(), "image": image.tolist()})
    else:
        print(_fmt_vector(image))
    return 0


def _cmd_orbit(args) -> int:
    field = _load_field(args.field)
    point = _parse_point(args.point)
    if args.steps < 1:
        raise InputError("--steps must be at least 1")
    grid = np.linspace(args.t0, args.t1, args.steps + 1)
    path = orbit(make_flow(field), point, grid)
    print("t," + ",".join(f"u{i}" for i in range(1, field.n + 1)))
    for t, row in zip(path.times, path.points):
        print(",".join([fmt_float(t)] + [fmt_float(v) for v in row]))
    return 0


def _cmd_bracket(args) -> int:
    x = _load_field(args.x)
    y = _load_field(args.y)
    try:
        result = bracket(x, y)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _print_json(result.to_dict())
    return 0


_GROUP_KINDS = {
    "T": ga.TRANSLATION_GROUP,
    "GL": ga.GENERAL_LINEAR,
    "GA": ga.GENERAL_AFFINE,
}


def _build_catalog_action(group: str, name: str, n: int, s, q) -> ga.GroupAction:
    kind = _GROUP_KINDS[group]
    if name == "standard":
        variant = {
            ga.TRANSLATION_GROUP: ga.STANDARD_TRANSLATION,
            ga.GENERAL_LINEAR: ga.STANDARD_LINEAR,
            ga.GENERAL_AFFINE: ga.STANDARD_AFFINE,
        }[kind]
        return ga.GroupAction(variant, n)
    if name == "exp-translation":
        if kind != ga.TRANSLATION_GROUP:
            raise InputError("exp-translation is an action of the translation group")
        if s is None:
            raise InputError("exp-translation needs --s")
        weight = _parse_point(s)
        if weight.size != n:
            raise InputError(f"--s has dim {weight.size}, tangent lives on R^{n}")
        return ga.exp_translation_action(weight)
    if name == "det-weighted":
        if kind != ga.GENERAL_LINEAR:
            raise InputError("det-weighted is an action of the general linear group")
        if q is None:
            raise InputError("det-weighted needs --q")
        return ga.det_weighted_action(n, q)
    raise InputError(f"unknown action {name!r}")


def _cmd_fundamental(args) -> int:
    kind = _GROUP_KINDS[args.group]
    data = _load_json(args.X)
    try:
        tangent = ga.TangentAtIdentity.from_dict(kind, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.X}: {exc}") from exc
    action = _build_catalog_action(args.group, args.action, tangent.n, args.s, args.q)
    try:
        field = ga.fundamental_field_analytic(action, tangent)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _print_json(field.to_dict())
    return 0


_SLOT_KINDS = ("slot", "square", "sin")


def _scalar_field_from_json(data: dict, m: int) -> ScalarField:
    """Scalar field on R^m from a small declarative catalog.

    kinds: zero; slot/square/sin with a 1-based "index"; linear with
    "coeffs" dotted against the slots.
    """
    kind = data.get("kind")
    if kind == "zero":
        return ScalarField(m, lambda xi: 0.0, grad=lambda xi: np.zeros(m))
    if kind in _SLOT_KINDS:
        index = data.get("index", 1)
        if not 1 <= index <= m:
            raise InputError(f"function index {index} out of range 1..{m}")
        k = index - 1
        if kind == "slot":
            def fn(xi, k=k):
                return float(xi[k])

            def grad(xi, k=k):
                g = np.zeros(m)
                g[k] = 1.0
                return g

        elif kind == "square":
            def fn(xi, k=k):
                return float(xi[k] ** 2)

            def grad(xi, k=k):
                g = np.zeros(m)
                g[k] = 2.0 * xi[k]
                return g

        else:
            def fn(xi, k=k):
                return float(np.sin(xi[k]))

            def grad(xi, k=k):
                g = np.zeros(m)
                g[k] = np.cos(xi[k])
                return g

        return ScalarField(m, fn, grad=grad)
    if kind == "linear":
        coeffs = np.asarray(data.get("coeffs", []), dtype=float)
        if coeffs.size != m:
            raise InputError(f"linear function needs {m} coeffs")
        return ScalarField(
            m,
            lambda xi: float(np.dot(coeffs, xi)),
            grad=lambda xi: coeffs.copy(),
        )
    raise InputError(f"unknown scalar function kind {data.get('kind')!r}")


def _build_bundle(field: AffineField, data: dict) -> InvariantBundle:
    family = data.get("family")
    if family == "constant":
        if field.classify() != "constant":
            raise InputError("constant bundle family needs a constant field")
        m = field.n - 1
        F = _scalar_field_from_json(data["F"], m) if "F" in data else None
        raw_g = data.get("G")
        if raw_g is None:
            G = None
        elif isinstance(raw_g, list):
            G = [_scalar_field_from_json(g, m) for g in raw_g]
        else:
            G = _scalar_field_from_json(raw_g, m)
        try:
            return constant_field_bundle(field.B, F=F, G=G)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if family == "planar":
        try:
            alpha = float(data["alpha"])
            beta = float(data["beta"])
            gamma = float(data["gamma"])
        except KeyError as exc:
            raise InputError(f"planar bundle family needs {exc}") from exc
        family_field, bundle = planar_affine_family(alpha, beta, gamma)
        if not (
            np.allclose(family_field.C, field.C, atol=1e-12)
            and np.allclose(family_field.B, field.B, atol=1e-12)
        ):
            raise InputError("field file does not match the planar family parameters")
        return bundle
    raise InputError(f"unknown bundle family {family!r}")


def _cmd_verify_invariants(args) -> int:
    field = _load_field(args.field)
    bundle = _build_bundle(field, _load_json(args.bundle))
    report = verify_bundle(
        bundle, sample_count=args.samples, tol=args.tol, seed=args.seed
    )
    _print_json(report.to_dict())
    return 0 if report.passed else 1


def _cmd_check_action(args) -> int:
    params = _load_json(args.params) if args.params else {}
    n = int(params.get("n", 2))
    name = args.action
    try:
        if name == "chart-conjugated":
            base_name = params.get("base")
            chart_name = params.get("chart")
            if not base_name or not chart_name:
                raise InputError("chart-conjugated needs 'base' and 'chart' params")
            base = _make_named_action(base_name, n, params)
            action = ga.chart_conjugated_action(base, get_chart(chart_name, n))
        else:
            action = _make_named_action(name, n, params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = ga.check_action_axioms(action, samples=args.samples, seed=args.seed)
    _print_json(report.to_dict())
    return 0 if report.passed else 1


def _make_named_action(name: str, n: int, params: dict) -> ga.GroupAction:
    if name == ga.EXP_TRANSLATION:
        s = np.asarray(params.get("s", np.ones(n)), dtype=float)
        return ga.exp_translation_action(s)
    if name == ga.DET_WEIGHTED:
        return ga.det_weighted_action(n, int(params.get("q", 1)))
    if name in (ga.STANDARD_LINEAR, ga.STANDARD_TRANSLATION, ga.STANDARD_AFFINE):
        return ga.GroupAction(name, n)
    raise InputError(f"unknown action {name!r}")


def _cmd_validate(args) -> int:
    results = run_all(seed=args.seed)
    failures = 0
    for result in results:
        status = "ok  " if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        failures += 0 if result.passed else 1
    if failures:
        print(f"{failures} of {len(results)} checks failed")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-fields",
        description="Flows, brackets, invariants, and fundamental fields "
        "of constant, linear, and affine vector fields on R^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flow", help="image of a point under the time-t flow")
    p.add_argument("--field", required=True, help="field JSON file")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.add_argument("--format", choices=("plain", "json"), default="plain")
    p.set_defaults(fn=_cmd_flow)

    p = sub.add_parser("orbit", help="CSV trajectory on a uniform time grid")
    p.add_argument("--field", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--steps", type=int, default=100, help="number of grid intervals")
    p.set_defaults(fn=_cmd_orbit)

    p = sub.add_parser("bracket", help="Lie bracket of two fields")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(fn=_cmd_bracket)

    p = sub.add_parser("fundamental", help="fundamental field of a catalog action")
    p.add_argument("--group", choices=sorted(_GROUP_KINDS), required=True)
    p.add_argument(
        "--action",
        default="standard",
        choices=("standard", "exp-translation", "det-weighted"),
    )
    p.add_argument("--X", required=True, help="tangent JSON file")
    p.add_argument("--s", help="weight vector for exp-translation")
    p.add_argument("--q", type=int, help="determinant power for det-weighted")
    p.set_defaults(fn=_cmd_fundamental)

    p = sub.add_parser("verify-invariants", help="verify a bundle against a field")
    p.add_argument("--field", required=True)
    p.add_argument("--bundle", required=True, help="bundle JSON file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=_cmd_verify_invariants)

    p = sub.add_parser("check-action", help="action-axiom defect report")
    p.add_argument(
        "--action",
        required=True,
        choices=(
            ga.STANDARD_LINEAR,
            ga.STANDARD_TRANSLATION,
            ga.STANDARD_AFFINE,
            ga.EXP_TRANSLATION,
            ga.DET_WEIGHTED,
            "chart-conjugated",
        ),
    )
    p.add_argument("--params", help="parameter JSON file")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=_cmd_check_action)

    p = sub.add_parser("validate", help="run the cross-module validation suite")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
