"""Named verification suites run by the CLI.

Each check produces a CheckRecord carrying the label of the identity it
verifies (eq-N / thm-N / prop-N anchors), the measured residual, and the
tolerance it was held to.  Given the same spec, seed and flags the suites
are fully deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import connections as conn_mod
from .connections import (
    FourParamsP,
    FourParamsS,
    LambdaMu,
    QMonomialTable,
    TenParams,
    almost_phi_residual,
    apply_deformation,
    base_deformation,
    check_connection_flags,
    eq17_residual,
    eq19_torsion,
    natural_family,
    parameter_conditions,
    q_four_param,
    q_ten_param,
    torsion,
    yano_connection,
)
from .curvature_lab import (
    check_curvature_like,
    curvature_via_deformation,
    phi_kaehler_residual,
    pi_basis,
    r_prime_formula_rhs,
    verify_r_prime_formula,
    xi_slot_residual,
)
from .fundamental import (
    normality_consequences,
    ntilde_consequences,
)
from .geometry import curvature, nabla_tensor
from .pipeline import (
    Pipeline,
    compute_pipeline,
    f45_connection,
    f45_curvature_pair,
    f45_deformation_of,
    f45_q_field,
    levi_civita_curvature,
)
from .randgen import random_four_params, random_lambda_mu, random_ten_params
from .registry import load_golden
from .report import CheckRecord, VerificationReport, merge_reports
from .scalars import EXACT, format_scalar, zero
from .structure import validate_structure
from .tensor import (
    apply_endo,
    max_abs,
    permute,
    plug_vector,
    tensor_add,
    tensor_sub,
)

SUITE_ORDER = (
    "structure",
    "nijenhuis",
    "classify",
    "theorem1",
    "prop2",
    "torsion",
    "family21",
    "curvature",
)


@dataclass
class VerifyContext:
    spec_name: str
    pipe: Pipeline
    scalar_backend: str
    seed: int
    rng: random.Random
    draws: int = 20
    tolerance_override: Optional[float] = None
    golden: Optional[dict] = None

    def tol(self, kind: str):
        """Per-kind tolerance: 0 on the exact backend; on floats the
        structural checks are noise-free, geometry carries O(h^2)
        finite-difference error and curvature stacks two of them."""
        if self.tolerance_override is not None and self.scalar_backend != EXACT:
            return self.tolerance_override
        if self.scalar_backend == EXACT:
            return 0
        return {"structure": 1e-9, "geometry": 1e-6, "curvature": 1e-5}[kind]

    def record(self, check_id: str, anchor: str, residual, kind: str = "geometry",
               passed: Optional[bool] = None) -> CheckRecord:
        tolerance = self.tol(kind)
        if passed is None:
            passed = residual <= tolerance
        return CheckRecord(
            check_id=check_id,
            anchor=anchor,
            residual=format_scalar(residual),
            passed=bool(passed),
            backend=self.scalar_backend,
            tolerance=format_scalar(tolerance),
        )


def make_context(
    spec_name: str,
    structure,
    backend,
    seed: int = 0,
    draws: int = 20,
    tolerance: Optional[float] = None,
    golden: Optional[dict] = None,
) -> VerifyContext:
    pipe = compute_pipeline(structure, backend, tol=tolerance)
    return VerifyContext(
        spec_name=spec_name,
        pipe=pipe,
        scalar_backend=structure.backend,
        seed=seed,
        rng=random.Random(seed),
        draws=draws,
        tolerance_override=tolerance,
        golden=golden,
    )


# ---------------------------------------------------------------------------
# suites


def suite_structure(ctx: VerifyContext):
    pipe = ctx.pipe
    s = pipe.structure
    out = []
    report = validate_structure(s)
    anchor_by_name = {
        "phi_square": "eq-1",
        "eta_xi": "eq-1",
        "norden_metric": "eq-1",
        "phi_xi": "sec-1",
        "eta_phi": "sec-1",
        "g_symmetric": "eq-1",
        "phi_g_symmetric": "sec-1",
        "eta_from_g": "sec-1",
        "signature": "sec-1",
    }
    for c in report.checks:
        out.append(
            ctx.record(f"structure.{c.name}", anchor_by_name.get(c.name, "eq-1"),
                       c.residual, "structure")
        )
    # associated metric is Norden again
    from .structure import associated_metric
    from .tensor import outer

    g_tilde = associated_metric(s)
    gt_pp = apply_endo(apply_endo(g_tilde, s.phi, 0), s.phi, 1)
    resid = max_abs(tensor_sub(tensor_add(gt_pp, g_tilde), outer(s.eta, s.eta)))
    out.append(ctx.record("structure.assoc_metric_norden", "sec-1", resid, "structure"))

    f = pipe.fund.f
    out.append(
        ctx.record(
            "fundamental.f_sym_last_pair", "eq-3",
            max_abs(tensor_sub(f, permute(f, (0, 2, 1)))), "geometry",
        )
    )
    lhs = apply_endo(apply_endo(f, s.phi, 1), s.phi, 2)
    from .fundamental import _eta_on_slot

    f_xi_mid = plug_vector(f, s.xi, 1)
    f_xi_last = plug_vector(f, s.xi, 2)
    rhs = tensor_sub(
        tensor_sub(f, _eta_on_slot(f_xi_mid, s.eta, 1)),
        _eta_on_slot(f_xi_last, s.eta, 2),
    )
    out.append(ctx.record("fundamental.f_sym_phi_pair", "eq-3", max_abs(tensor_sub(lhs, rhs))))
    out.append(
        ctx.record(
            "fundamental.f_xi_xi_zero", "eq-3",
            max_abs(plug_vector(plug_vector(f, s.xi, 1), s.xi, 1)),
        )
    )
    return out


def suite_nijenhuis(ctx: VerifyContext):
    pipe = ctx.pipe
    out = [ctx.record("nijenhuis.bracket_agreement", "eq-4", pipe.nij.bracket_residual)]
    if pipe.classes.is_normal.value:
        cons = normality_consequences(pipe.structure, pipe.fund)
        out.append(ctx.record("nijenhuis.normal_f_xi_symmetric", "eq-5", cons["f_xi_symmetric"]))
        out.append(ctx.record("nijenhuis.normal_omega_zero", "eq-5", cons["omega_zero"]))
    if pipe.classes.is_f3_plus_f7_candidate.value:
        cons = ntilde_consequences(pipe.structure, pipe.fund)
        out.append(ctx.record("nijenhuis.ntilde_f_phiphi_xi", "eq-6", cons["f_phiphi_xi"]))
        out.append(ctx.record("nijenhuis.ntilde_omega_zero", "eq-6", cons["omega_zero"]))
    return out


def suite_classify(ctx: VerifyContext):
    pipe = ctx.pipe
    cls = pipe.classes
    out = []
    implication = 0 if (not (cls.is_f4.value and cls.is_f5.value) or cls.is_f4_plus_f5.value) else 1
    out.append(ctx.record("classify.f4_and_f5_imply_f45", "sec-3", implication, "structure"))
    if cls.is_f4.value:
        out.append(
            ctx.record(
                "classify.eq22_theta_closed",
                "eq-22",
                _closedness(pipe, which="theta"),
            )
        )
    if cls.is_f5.value:
        out.append(
            ctx.record(
                "classify.eq22_theta_star_closed",
                "eq-22",
                _closedness(pipe, which="theta_star"),
            )
        )
    if ctx.golden:
        flags = cls.flags()
        mism = sum(
            1
            for name, want in ctx.golden.get("flags", {}).items()
            if name in flags and flags[name].value != bool(want)
        )
        out.append(ctx.record("classify.golden_flags", "sec-3", mism, "structure"))
        tol = ctx.golden.get("tolerance")
        for key, attr in (("theta_xi", cls.theta_xi), ("theta_star_xi", cls.theta_star_xi)):
            if key in ctx.golden:
                want = ctx.golden[key]
                if ctx.scalar_backend == EXACT:
                    from .scalars import parse_rational

                    gap = abs(attr - parse_rational(str(want)))
                else:
                    gap = abs(float(attr) - float(want))
                out.append(ctx.record(f"classify.golden_{key}", "sec-1", gap))
    return out


def _closedness(pipe: Pipeline, which: str):
    s = pipe.structure
    fd = pipe.fund
    dvals = fd.dtheta_xi if which == "theta" else fd.dtheta_star_xi
    xi_val = fd.xi_theta_xi if which == "theta" else fd.xi_theta_star_xi
    worst = zero(s.backend)
    for a in range(s.dim):
        r = dvals[a] - xi_val * s.eta.comps[a]
        r = -r if r < 0 else r
        if r > worst:
            worst = r
    return worst


def suite_theorem1(ctx: VerifyContext):
    pipe = ctx.pipe
    s, fd, nd = pipe.structure, pipe.fund, pipe.nij
    table = QMonomialTable(s, fd)
    out = [ctx.record("theorem1.eq8_base", "eq-8", almost_phi_residual(s, fd, table.base))]

    worst8 = zero(s.backend)
    worst17 = zero(s.backend)
    for _ in range(ctx.draws):
        t = random_ten_params(ctx.rng)
        if ctx.scalar_backend != EXACT:
            t = TenParams.from_seq([float(v) for v in t.as_tuple()])
        q = table.evaluate(t)
        r8 = almost_phi_residual(s, fd, q)
        worst8 = max(worst8, r8)
        r17 = eq17_residual(s, fd, nd, t, table=table)
        worst17 = max(worst17, r17)
    out.append(ctx.record("theorem1.eq8_random_t", "thm-1", worst8))
    out.append(ctx.record("theorem1.eq17_identity", "eq-17", worst17))

    # base deformation is almost contact: Q(x,y,xi) = F(x,phi y,xi) = -Q(x,xi,y)
    q0 = table.base
    f_phi_xi = plug_vector(apply_endo(fd.f, s.phi, 1), s.xi, 2)
    r15a = max_abs(tensor_sub(plug_vector(q0, s.xi, 2), f_phi_xi))
    r15b = max_abs(tensor_add(plug_vector(q0, s.xi, 1), f_phi_xi))
    out.append(ctx.record("theorem1.eq15_base", "eq-15", max(r15a, r15b)))
    return out


def suite_prop2(ctx: VerifyContext):
    pipe = ctx.pipe
    s, fd, nd = pipe.structure, pipe.fund, pipe.nij
    be = pipe.backend
    conn = pipe.conn
    table = QMonomialTable(s, fd)

    def rand():
        v = ctx.rng
        from .randgen import random_fraction

        x = random_fraction(v)
        return float(x) if ctx.scalar_backend != EXACT else x

    out = []
    # forward (ii): natural parameter conditions imply full parallelism
    p = FourParamsP(rand(), rand(), rand(), rand())
    t_nat = p.to_ten()
    assert parameter_conditions(t_nat)["natural"]
    dq = q_ten_param(s, fd, t_nat, table=table)
    flags = check_connection_flags(apply_deformation(conn, dq), s, be)
    out.append(
        ctx.record(
            "prop2.natural_forward", "prop-2",
            max(flags["phi"], flags["xi"], flags["eta"], flags["g"]),
        )
    )
    # forward (i): almost contact conditions imply xi/eta parallelism
    vals = [rand() for _ in range(8)]
    t_ac = TenParams.from_seq(vals + [vals[0] + vals[1], vals[2] + vals[3]])
    assert parameter_conditions(t_ac)["almost_contact"]
    dq = q_ten_param(s, fd, t_ac, table=table)
    flags = check_connection_flags(apply_deformation(conn, dq), s, be)
    out.append(
        ctx.record(
            "prop2.almost_contact_forward", "prop-2",
            max(flags["phi"], flags["xi"], flags["eta"]),
        )
    )

    # nabla'g equals the negated symmetric part of Q (the metricity route)
    from .tensor import raise_slot

    t_any = random_ten_params(ctx.rng)
    if ctx.scalar_backend != EXACT:
        t_any = TenParams.from_seq([float(v) for v in t_any.as_tuple()])
    q_any = table.evaluate(t_any)
    conn_any = apply_deformation(
        conn, conn_mod.DeformationQ(q=q_any, q_mixed=raise_slot(q_any, s.g_inv, 2))
    )
    nab_g = nabla_tensor(conn_any, s.g, be)
    sym_q = tensor_add(q_any, permute(q_any, (0, 2, 1)))
    out.append(
        ctx.record("prop2.eq16_metricity_route", "eq-16", max_abs(tensor_add(nab_g, sym_q)))
    )

    # converse, detectability-aware: a singly violated condition must move
    # the measured residuals exactly when its monomials are generic here
    tolerance = ctx.tol("geometry")
    for label, idx in (("t1", 0), ("t3", 2), ("t5", 4), ("t7", 6), ("t9", 8), ("t10", 9)):
        t_v = [zero(s.backend)] * 10
        one_ = t_v[0] + 1 if ctx.scalar_backend == EXACT else 1.0
        t_v[idx] = one_
        tv = TenParams.from_seq(t_v)
        group = table.groups[idx + 1]
        det_g = max_abs(tensor_add(group, permute(group, (0, 2, 1))))
        det_xi = max_abs(plug_vector(group, s.xi, 1))
        dq_v = q_ten_param(s, fd, tv, table=table)
        meas = check_connection_flags(apply_deformation(conn, dq_v), s, be)
        ok_g = (meas["g"] > tolerance) == (det_g > tolerance)
        ok_xi = (meas["xi"] > tolerance) == (det_xi > tolerance)
        out.append(
            ctx.record(
                f"prop2.converse_{label}", "prop-2",
                max(meas["g"], meas["xi"]),
                passed=ok_g and ok_xi,
            )
        )

    # theorem 3: the natural family is natural; on normal structures it
    # collapses to the canonical connection independent of the parameters
    p2 = FourParamsP(rand(), rand(), rand(), rand())
    dq_nat = natural_family(s, fd, nd, p2, conn, be)
    meas_nat = check_connection_flags(apply_deformation(conn, dq_nat), s, be)
    out.append(
        ctx.record(
            "prop2.natural_family_parallel", "thm-3",
            max(meas_nat["phi"], meas_nat["eta"], meas_nat["g"]),
        )
    )
    if pipe.classes.is_normal.value:
        dq_canon = base_deformation(s, fd)
        out.append(
            ctx.record(
                "prop2.natural_family_unique_on_normal", "eq-D",
                max_abs(tensor_sub(dq_nat.q, dq_canon.q)),
            )
        )
    return out


def suite_torsion(ctx: VerifyContext):
    pipe = ctx.pipe
    s, fd = pipe.structure, pipe.fund
    be, conn = pipe.backend, pipe.conn
    out = [ctx.record("torsion.levi_civita_zero", "sec-1", max_abs(torsion(conn, be, s.g)))]

    on_class = pipe.classes.is_normal.value and pipe.classes.eta_closed.value
    if not on_class:
        return out

    worst = zero(s.backend)
    worst_anti = zero(s.backend)
    for _ in range(min(ctx.draws, 20)):
        sp = random_four_params(ctx.rng)
        if ctx.scalar_backend != EXACT:
            sp = FourParamsS(*[float(v) for v in sp.as_tuple()])
        conn2 = apply_deformation(conn, q_four_param(s, fd, sp, flags=pipe.classes))
        t_direct = torsion(conn2, be, s.g)
        gap = max_abs(tensor_sub(t_direct, eq19_torsion(s, fd, sp)))
        worst = max(worst, gap)
        worst_anti = max(worst_anti, max_abs(tensor_add(t_direct, permute(t_direct, (1, 0, 2)))))
    out.append(ctx.record("torsion.eq19_matches_direct", "eq-19", worst))
    out.append(ctx.record("torsion.antisymmetric_first_pair", "eq-19", worst_anti))

    yano = yano_connection(s, conn, fd, flags=pipe.classes)
    out.append(ctx.record("torsion.yano_torsion_zero", "thm-4", max_abs(torsion(yano, be, s.g))))
    out.append(
        ctx.record(
            "torsion.yano_phi_parallel", "thm-4",
            check_connection_flags(yano, s, be)["phi"],
        )
    )
    from fractions import Fraction

    quarter = 0.25 if ctx.scalar_backend != EXACT else Fraction(1, 4)
    sp_yano = FourParamsS(0 * quarter, quarter, -3 * quarter, 0 * quarter)
    conn_sp = apply_deformation(conn, q_four_param(s, fd, sp_yano, flags=pipe.classes))
    out.append(
        ctx.record(
            "torsion.yano_equals_four_param", "eq-20",
            max_abs(tensor_sub(yano.gamma, conn_sp.gamma)),
        )
    )
    return out


def suite_family21(ctx: VerifyContext):
    pipe = ctx.pipe
    s, fd = pipe.structure, pipe.fund
    be, conn = pipe.backend, pipe.conn
    out = []
    if not pipe.classes.is_f4_plus_f5.value:
        return out

    worst = zero(s.backend)
    for _ in range(min(ctx.draws, 10)):
        sp = random_four_params(ctx.rng)
        if ctx.scalar_backend != EXACT:
            sp = FourParamsS(*[float(v) for v in sp.as_tuple()])
        via_four = apply_deformation(conn, q_four_param(s, fd, sp, flags=pipe.classes))
        via_lm = f45_connection(pipe, sp.to_lambda_mu())
        worst = max(worst, max_abs(tensor_sub(via_four.gamma, via_lm.gamma)))
    out.append(ctx.record("family21.matches_four_param", "prop-3", worst))

    one_ = 1 if ctx.scalar_backend == EXACT else 1.0
    yano = yano_connection(s, conn, fd, flags=pipe.classes)
    lm_yano = f45_connection(pipe, LambdaMu(0 * one_, -one_))
    out.append(
        ctx.record(
            "family21.yano_at_lambda0_mu_minus1", "eq-20",
            max_abs(tensor_sub(lm_yano.gamma, yano.gamma)),
        )
    )
    from .connections import canonical_connection

    canon = canonical_connection(s, conn, fd)
    lm_canon = f45_connection(pipe, LambdaMu(0 * one_, 0 * one_))
    out.append(
        ctx.record(
            "family21.canonical_at_lambda0_mu0", "eq-D",
            max_abs(tensor_sub(lm_canon.gamma, canon.gamma)),
        )
    )
    return out


def suite_curvature(ctx: VerifyContext):
    pipe = ctx.pipe
    s, fd = pipe.structure, pipe.fund
    be, conn = pipe.backend, pipe.conn
    out = []

    r = levi_civita_curvature(pipe)
    like = check_curvature_like(r)
    out.append(
        ctx.record(
            "curvature.levi_civita_curvature_like", "sec-1",
            max(like.antisym_xy, like.antisym_zu, like.bianchi), "curvature",
        )
    )
    pis = pi_basis(s, check=False)
    worst = zero(s.backend)
    for t in pis.as_dict().values():
        c = check_curvature_like(t)
        worst = max(worst, c.antisym_xy, c.antisym_zu, c.bianchi)
    out.append(ctx.record("curvature.pi_basis_curvature_like", "eq-26", worst, "structure"))

    # deformation route against the direct route for the canonical connection
    dq0 = base_deformation(s, fd)
    conn0 = apply_deformation(conn, dq0, provenance="canonical")
    if pipe.is_chart:
        from .fundamental import fundamental_tensor as _ft

        def q0_field(point):
            be2 = pipe.backend.rebased(point)
            c2 = be2.levi_civita()
            f2 = _ft(be2.structure, c2, be2, with_derivatives=False)
            return base_deformation(be2.structure, f2).q

        def gamma0_field(point):
            be2 = pipe.backend.rebased(point)
            c2 = be2.levi_civita()
            f2 = _ft(be2.structure, c2, be2, with_derivatives=False)
            return tensor_add(c2.gamma, base_deformation(be2.structure, f2).q_mixed)

        conn0 = type(conn0)(conn0.dim, conn0.gamma, conn0.provenance, field=gamma0_field)
        r0_direct = curvature(conn0, be, s.g)
        r0_path = curvature_via_deformation(r, dq0, conn, be, s.g, q_field=q0_field)
    else:
        r0_direct = curvature(conn0, be, s.g)
        r0_path = curvature_via_deformation(r, dq0, conn, be, s.g)
    out.append(
        ctx.record(
            "curvature.eq24_canonical_path", "eq-24",
            max_abs(tensor_sub(r0_path, r0_direct)), "curvature",
        )
    )

    if pipe.classes.is_f4_plus_f5.value:
        worst24 = zero(s.backend)
        worst25 = zero(s.backend)
        worst_pk = zero(s.backend)
        worst_xi = zero(s.backend)
        n_draws = 3 if pipe.is_chart else min(ctx.draws, 10)
        for _ in range(n_draws):
            lm = random_lambda_mu(ctx.rng)
            if ctx.scalar_backend != EXACT:
                lm = LambdaMu(float(lm.lam), float(lm.mu))
            conn2 = f45_connection(pipe, lm)
            r2 = curvature(conn2, be, s.g)
            dq2 = f45_deformation_of(pipe, lm)
            q_field = f45_q_field(pipe, lm) if pipe.is_chart else None
            r2_path = curvature_via_deformation(r, dq2, conn, be, s.g, q_field=q_field)
            worst24 = max(worst24, max_abs(tensor_sub(r2_path, r2)))
            rep = verify_r_prime_formula(s, fd, r, r2, pis)
            worst25 = max(worst25, rep.formula_residual)
            worst_pk = max(worst_pk, rep.phi_kaehler_residual)
            worst_xi = max(worst_xi, rep.xi_slot_residual)
        out.append(ctx.record("curvature.eq24_family_path", "eq-24", worst24, "curvature"))
        out.append(ctx.record("curvature.eq25_formula", "eq-25", worst25, "curvature"))
        out.append(ctx.record("curvature.r_prime_phi_kaehler", "prop-4", worst_pk, "curvature"))
        out.append(ctx.record("curvature.r_prime_xi_slot", "prop-4", worst_xi, "curvature"))
    return out


_SUITES = {
    "structure": suite_structure,
    "nijenhuis": suite_nijenhuis,
    "classify": suite_classify,
    "theorem1": suite_theorem1,
    "prop2": suite_prop2,
    "torsion": suite_torsion,
    "family21": suite_family21,
    "curvature": suite_curvature,
}


def run_verify(
    spec_name: str,
    structure,
    backend,
    suites=("all",),
    seed: int = 0,
    draws: int = 20,
    tolerance: Optional[float] = None,
    golden: Optional[dict] = None,
    elapsed: float = 0.0,
) -> VerificationReport:
    selected = list(SUITE_ORDER) if "all" in suites else [s for s in SUITE_ORDER if s in suites]
    unknown = [s for s in suites if s not in SUITE_ORDER and s != "all"]
    if unknown:
        raise ValueError(f"unknown suites: {unknown}; known: {SUITE_ORDER}")
    ctx = make_context(
        spec_name, structure, backend, seed=seed, draws=draws,
        tolerance=tolerance, golden=golden,
    )
    parts = [(name, _SUITES[name](ctx)) for name in selected]
    return merge_reports(spec_name, ctx.scalar_backend, seed, parts, elapsed=elapsed)


# ---------------------------------------------------------------------------
# parameter sweeps


def run_sweep(
    spec_name: str,
    structure,
    backend,
    family: str,
    count: int = 20,
    grid: Optional[list] = None,
    seed: int = 0,
    tolerance: Optional[float] = None,
) -> VerificationReport:
    ctx = make_context(spec_name, structure, backend, seed=seed, tolerance=tolerance)
    pipe = ctx.pipe
    s, fd, nd = pipe.structure, pipe.fund, pipe.nij
    be, conn = pipe.backend, pipe.conn
    table = QMonomialTable(s, fd)
    tolerance_g = ctx.tol("geometry")
    checks = []

    if family == "ten":
        for k in range(count):
            t = random_ten_params(ctx.rng)
            if ctx.scalar_backend != EXACT:
                t = TenParams.from_seq([float(v) for v in t.as_tuple()])
            preds = parameter_conditions(t)
            dq = q_ten_param(s, fd, t, table=table)
            meas = check_connection_flags(apply_deformation(conn, dq), s, be)
            # detectability-aware agreement per the class degeneracies
            q_t = tensor_sub(dq.q, table.base)
            det_g = max_abs(tensor_add(q_t, permute(q_t, (0, 2, 1))))
            det_xi = max_abs(plug_vector(q_t, s.xi, 1))
            ok = True
            if preds["natural"]:
                ok = ok and meas["g"] <= tolerance_g and meas["xi"] <= tolerance_g
            else:
                ok = ok and (meas["g"] > tolerance_g) == (det_g > tolerance_g)
            if preds["almost_contact"]:
                ok = ok and meas["xi"] <= tolerance_g and meas["eta"] <= tolerance_g
            else:
                ok = ok and (meas["xi"] > tolerance_g) == (det_xi > tolerance_g)
            checks.append(
                ctx.record(
                    f"sweep.ten.draw_{k:02d}", "prop-2",
                    max(meas["g"], meas["xi"], meas["eta"]), passed=ok,
                )
            )
    elif family == "four":
        if not (pipe.classes.is_normal.value and pipe.classes.eta_closed.value):
            raise conn_mod.ClassViolationError(
                "four-parameter sweep needs a normal structure with closed eta"
            )
        for k in range(count):
            sp = random_four_params(ctx.rng)
            if ctx.scalar_backend != EXACT:
                sp = FourParamsS(*[float(v) for v in sp.as_tuple()])
            q4 = q_four_param(s, fd, sp, flags=pipe.classes)
            q10 = q_ten_param(s, fd, sp.lift_to_ten(), table=table)
            gap_lift = max_abs(tensor_sub(q4.q, q10.q))
            conn2 = apply_deformation(conn, q4)
            gap_t = max_abs(tensor_sub(torsion(conn2, be, s.g), eq19_torsion(s, fd, sp)))
            checks.append(
                ctx.record(f"sweep.four.draw_{k:02d}", "eq-18", max(gap_lift, gap_t))
            )
    elif family == "lambda-mu":
        pis = pi_basis(s, check=False)
        r = levi_civita_curvature(pipe)
        if grid is not None:
            values = [(a, b) for a in grid for b in grid]
        else:
            values = []
            for _ in range(count):
                lm = random_lambda_mu(ctx.rng)
                values.append((lm.lam, lm.mu))
        for k, (lam, mu) in enumerate(values):
            if ctx.scalar_backend != EXACT:
                lam, mu = float(lam), float(mu)
            lm = LambdaMu(lam, mu)
            conn2 = f45_connection(pipe, lm)
            r2 = curvature(conn2, be, s.g)
            rep = verify_r_prime_formula(s, fd, r, r2, pis)
            sp = FourParamsS(lam, 0 * lam, mu, 0 * mu)
            via_four = apply_deformation(conn, q_four_param(s, fd, sp, flags=pipe.classes))
            gap = max_abs(tensor_sub(via_four.gamma, conn2.gamma))
            checks.append(
                ctx.record(
                    f"sweep.lambda_mu.point_{k:02d}", "eq-25",
                    max(rep.formula_residual, gap), "curvature",
                )
            )
    else:
        raise ValueError(f"unknown sweep family {family!r}; use ten, four or lambda-mu")

    return merge_reports(spec_name, ctx.scalar_backend, seed, [(f"sweep-{family}", checks)])
