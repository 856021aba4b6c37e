"""Command-line verification workflows.

Verbs: validate, fundamental, classify, connect, torsion, curvature,
verify, sweep.  A spec argument is either the name of a bundled registry
example (ex-flat, ex-f4, ex-f5, ex-f45, ex-chart-exp, ex-chart-poly) or a
path to a manifold spec file.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 input or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .checks import SUITE_ORDER, run_sweep, run_verify
from .connections import (
    ClassViolationError,
    FourParamsP,
    FourParamsS,
    LambdaMu,
    TenParams,
    apply_deformation,
    canonical_connection,
    check_connection_flags,
    eq19_torsion,
    natural_family,
    q_four_param,
    q_ten_param,
    torsion,
    yano_connection,
)
from .curvature_lab import pi_basis, verify_r_prime_formula
from .geometry import AntisymmetryError, GeometryError, JacobiError, curvature
from .pipeline import compute_pipeline, f45_connection, levi_civita_curvature
from .registry import build_example, load_golden, registry, spec_path
from .report import VerificationReport
from .scalars import BackendError, EXACT, FLOAT, format_scalar, parse_scalar
from .specfile import SpecParseError, parse_spec
from .structure import StructureAxiomError
from .tensor import DegenerateMetricError, ShapeError, max_abs, tensor_sub

INPUT_ERRORS = (
    SpecParseError,
    AntisymmetryError,
    JacobiError,
    StructureAxiomError,
    DegenerateMetricError,
    BackendError,
    ShapeError,
    ClassViolationError,
    GeometryError,
    FileNotFoundError,
    ValueError,
)


def _load(spec_arg: str, scalar_backend: str):
    """Resolve a bundled example name or spec-file path."""
    names = registry()
    if spec_arg in names:
        path = spec_path(spec_arg)
        spec = parse_spec(path)
    else:
        spec = parse_spec(spec_arg)
    structure, backend = spec.build(scalar_backend)
    return spec, structure, backend


def _parse_params(text: str, scalar_backend: str, expected: int, label: str):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != expected:
        raise ValueError(f"{label} needs {expected} comma-separated values, got {len(parts)}")
    return [parse_scalar(p, scalar_backend) for p in parts]


def _emit(report: VerificationReport, args) -> int:
    print(report.human_table())
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    return 0 if report.passed else 1


def _emit_values(doc: dict, args, title: str) -> int:
    width = max(len(k) for k in doc) if doc else 8
    print(title)
    for key, value in doc.items():
        print(f"  {key:<{width}}  {value}")
    if args.report:
        Path(args.report).write_text(
            json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def cmd_validate(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    t0 = time.perf_counter()
    report = run_verify(
        spec.name, structure, backend, suites=("structure",), seed=args.seed,
        tolerance=args.tolerance, elapsed=0.0,
    )
    report.elapsed_seconds = time.perf_counter() - t0
    return _emit(report, args)


def cmd_fundamental(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    pipe = compute_pipeline(structure, backend, tol=args.tolerance)
    fd = pipe.fund
    d = structure.dim
    doc = {}
    for i in range(d):
        for j in range(d):
            for k in range(d):
                v = fd.f.get(i, j, k)
                if v != 0:
                    doc[f"F[{i},{j},{k}]"] = format_scalar(v)
    doc["theta(xi)"] = format_scalar(fd.theta_xi)
    doc["theta_star(xi)"] = format_scalar(fd.theta_star_xi)
    doc["omega"] = "[" + ", ".join(format_scalar(c) for c in fd.omega.comps) + "]"
    doc["xi(theta(xi))"] = format_scalar(fd.xi_theta_xi)
    doc["xi(theta_star(xi))"] = format_scalar(fd.xi_theta_star_xi)
    return _emit_values(doc, args, f"fundamental tensor data for {spec.name}")


def cmd_classify(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    pipe = compute_pipeline(structure, backend, tol=args.tolerance)
    doc = {}
    for name, flag in pipe.classes.flags().items():
        doc[name] = f"{flag.value} (residual {format_scalar(flag.residual)})"
    doc["theta_xi"] = format_scalar(pipe.classes.theta_xi)
    doc["theta_star_xi"] = format_scalar(pipe.classes.theta_star_xi)
    return _emit_values(doc, args, f"class predicates for {spec.name}")


def cmd_connect(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    pipe = compute_pipeline(structure, backend, tol=args.tolerance)
    sb = structure.backend
    family = args.family
    if family == "ten":
        t = TenParams.from_seq(_parse_params(args.params, sb, 10, "--params"))
        conn2 = apply_deformation(pipe.conn, q_ten_param(structure, pipe.fund, t))
    elif family == "four":
        sp = FourParamsS(*_parse_params(args.params, sb, 4, "--params"))
        conn2 = apply_deformation(
            pipe.conn,
            q_four_param(structure, pipe.fund, sp, flags=pipe.classes, override=args.override),
        )
    elif family == "natural":
        p = FourParamsP(*_parse_params(args.params, sb, 4, "--params"))
        conn2 = apply_deformation(
            pipe.conn, natural_family(structure, pipe.fund, pipe.nij, p, pipe.conn, backend)
        )
    elif family == "canonical":
        conn2 = canonical_connection(structure, pipe.conn, pipe.fund)
    elif family == "yano":
        conn2 = yano_connection(
            structure, pipe.conn, pipe.fund, flags=pipe.classes, override=args.override
        )
    elif family == "f45":
        lam, mu = _parse_params(args.params or "0,0", sb, 2, "--params")
        conn2 = f45_connection(pipe, LambdaMu(lam, mu), override=args.override)
    else:
        raise ValueError(f"unknown family {family!r}")
    flags = check_connection_flags(conn2, structure, backend)
    t_resid = max_abs(torsion(conn2, backend, structure.g))
    doc = {f"nabla'{k}_residual": format_scalar(v) for k, v in flags.items()}
    doc["torsion_max"] = format_scalar(t_resid)
    return _emit_values(doc, args, f"connection '{family}' on {spec.name}")


def cmd_torsion(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    pipe = compute_pipeline(structure, backend, tol=args.tolerance)
    sb = structure.backend
    sp = FourParamsS(*_parse_params(args.params, sb, 4, "--params"))
    conn2 = apply_deformation(
        pipe.conn,
        q_four_param(structure, pipe.fund, sp, flags=pipe.classes, override=args.override),
    )
    t_direct = torsion(conn2, backend, structure.g)
    t_formula = eq19_torsion(structure, pipe.fund, sp)
    gap = max_abs(tensor_sub(t_direct, t_formula))
    doc = {
        "torsion_max": format_scalar(max_abs(t_direct)),
        "eq19_gap": format_scalar(gap),
    }
    code = _emit_values(doc, args, f"torsion of the 4-parameter member on {spec.name}")
    tol = 0 if sb == EXACT else (args.tolerance or 1e-6)
    return code if gap <= tol else 1


def cmd_curvature(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    pipe = compute_pipeline(structure, backend, tol=args.tolerance)
    sb = structure.backend
    lam, mu = _parse_params(args.lambda_mu, sb, 2, "--lambda-mu")
    conn2 = f45_connection(pipe, LambdaMu(lam, mu), override=args.override)
    r = levi_civita_curvature(pipe)
    r2 = curvature(conn2, backend, structure.g)
    pis = pi_basis(structure, check=False)
    rep = verify_r_prime_formula(structure, pipe.fund, r, r2, pis)
    doc = {
        "eq25_residual": format_scalar(rep.formula_residual),
        "phi_kaehler_residual": format_scalar(rep.phi_kaehler_residual),
        "xi_slot_residual": format_scalar(rep.xi_slot_residual),
        "antisym_xy": format_scalar(rep.curvature_like.antisym_xy),
        "antisym_zu": format_scalar(rep.curvature_like.antisym_zu),
        "bianchi": format_scalar(rep.curvature_like.bianchi),
    }
    code = _emit_values(doc, args, f"curvature of the (lambda,mu) member on {spec.name}")
    tol = 0 if sb == EXACT else (args.tolerance or 1e-5)
    return code if rep.formula_residual <= tol else 1


def cmd_verify(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    suites = tuple(s.strip() for s in args.suite.split(",") if s.strip())
    golden = load_golden(spec.name)
    t0 = time.perf_counter()
    report = run_verify(
        spec.name, structure, backend, suites=suites, seed=args.seed,
        draws=args.draws, tolerance=args.tolerance, golden=golden,
    )
    report.elapsed_seconds = time.perf_counter() - t0
    return _emit(report, args)


def cmd_sweep(args) -> int:
    spec, structure, backend = _load(args.spec, args.backend)
    grid = None
    if args.grid:
        grid = [parse_scalar(v, structure.backend) for v in args.grid.split(",") if v.strip()]
    t0 = time.perf_counter()
    report = run_sweep(
        spec.name, structure, backend, family=args.family, count=args.count,
        grid=grid, seed=args.seed, tolerance=args.tolerance,
    )
    report.elapsed_seconds = time.perf_counter() - t0
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nordenlab",
        description="verification laboratory for linear connections on "
        "almost contact Norden-metric structures",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="bundled example name or spec file path")
    common.add_argument(
        "--backend", choices=(EXACT, FLOAT), default=EXACT,
        help="scalar backend for Lie specs (charts always run on floats)",
    )
    common.add_argument("--tolerance", type=float, default=None,
                        help="override the float-backend tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for random draws")
    common.add_argument("--report", default=None, help="write the canonical JSON report here")

    sub = parser.add_subparsers(dest="verb", required=True)

    sub.add_parser("validate", parents=[common],
                   help="structure axioms, signature, fundamental symmetries")

    sub.add_parser("fundamental", parents=[common],
                   help="fundamental tensor components and associated 1-forms")

    sub.add_parser("classify", parents=[common], help="class predicate flags")

    p = sub.add_parser("connect", parents=[common], help="build a family member")
    p.add_argument("--family", required=True,
                   choices=("ten", "four", "natural", "canonical", "yano", "f45"))
    p.add_argument("--params", default="", help="comma-separated rational parameters")
    p.add_argument("--override", action="store_true",
                   help="evaluate a family formula off its class")

    p = sub.add_parser("torsion", parents=[common],
                       help="torsion of a 4-parameter member vs the closed form")
    p.add_argument("--params", required=True, help="s1,s2,s3,s4")
    p.add_argument("--override", action="store_true")

    p = sub.add_parser("curvature", parents=[common],
                       help="curvature of a (lambda,mu) member vs the closed form")
    p.add_argument("--lambda-mu", dest="lambda_mu", default="0,0")
    p.add_argument("--override", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", default="all",
                   help=f"comma list from {', '.join(SUITE_ORDER)} or 'all'")
    p.add_argument("--draws", type=int, default=20, help="random draws per randomized suite")

    p = sub.add_parser("sweep", parents=[common], help="parameter sweeps")
    p.add_argument("--family", required=True, choices=("ten", "four", "lambda-mu"))
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--grid", default=None,
                   help="comma list of values; lambda-mu sweeps use the grid square")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "fundamental": cmd_fundamental,
        "classify": cmd_classify,
        "connect": cmd_connect,
        "torsion": cmd_torsion,
        "curvature": cmd_curvature,
        "verify": cmd_verify,
        "sweep": cmd_sweep,
    }
    try:
        return handlers[args.verb](args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
