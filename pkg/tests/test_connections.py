import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nordenlab import (
    FourParamsP,
    FourParamsS,
    LambdaMu,
    TenParams,
    apply_deformation,
    canonical_connection,
    check_connection_flags,
    eq17_residual,
    eq19_torsion,
    f45_family,
    natural_family,
    parameter_conditions,
    q_four_param,
    q_ten_param,
    torsion,
    yano_connection,
)
from nordenlab.connections import (
    AlmostPhiError,
    ClassViolationError,
    QMonomialTable,
    almost_phi_residual,
    base_deformation,
    f45_deformation,
)
from nordenlab.geometry import nabla_tensor
from nordenlab.randgen import random_structure, random_ten_params
from nordenlab.tensor import max_abs, permute, plug_vector, tensor_add, tensor_sub

F0, F1 = Fraction(0), Fraction(1)

rationals = st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=4)


def zero_t():
    return TenParams.from_seq([F0] * 10)


# ---------------------------------------------------------------------------
# the 10-parameter family


def test_base_deformation_spot_values(ex_f5):
    dq = base_deformation(ex_f5.structure, ex_f5.fund)
    assert dq.q.get(0, 0, 2) == -1          # Q(e1, e1, xi) = -alpha
    assert almost_phi_residual(ex_f5.structure, ex_f5.fund, dq.q) == 0


def test_abelian_deformation_vanishes_for_any_params(ex_flat, rng):
    table = QMonomialTable(ex_flat.structure, ex_flat.fund)
    for _ in range(5):
        t = random_ten_params(rng)
        assert table.evaluate(t).is_zero()


def test_theorem1_exact_on_bundled_examples(ex_f4, ex_f5, ex_f45, rng):
    for pipe in (ex_f4, ex_f5, ex_f45):
        table = QMonomialTable(pipe.structure, pipe.fund)
        for _ in range(20):
            t = random_ten_params(rng)
            q = table.evaluate(t)
            assert almost_phi_residual(pipe.structure, pipe.fund, q) == 0


def test_theorem1_unit_vectors_on_omega_generic(omega_generic):
    table = QMonomialTable(omega_generic.structure, omega_generic.fund)
    for i in range(10):
        t = [F0] * 10
        t[i] = F1
        q = table.evaluate(TenParams.from_seq(t))
        assert almost_phi_residual(omega_generic.structure, omega_generic.fund, q) == 0


@settings(max_examples=20, deadline=None)
@given(st.lists(rationals, min_size=10, max_size=10), st.integers(0, 2**30))
def test_theorem1_property_random_structures(tvals, seed):
    rng = random.Random(seed)
    s, be = random_structure(rng, rng.choice((1, 2)))
    from nordenlab import fundamental_tensor, nijenhuis

    fd = fundamental_tensor(s, be.levi_civita(), be)
    t = TenParams.from_seq([Fraction(v) for v in tvals])
    q_ten_param(s, fd, t)  # raises AlmostPhiError on any residual


def test_eq17_identity_universally(ex_f4, ex_f5, ex_f45, omega_generic, rng):
    for pipe in (ex_f4, ex_f5, ex_f45, omega_generic):
        table = QMonomialTable(pipe.structure, pipe.fund)
        for _ in range(10):
            t = random_ten_params(rng)
            assert eq17_residual(pipe.structure, pipe.fund, pipe.nij, t, table=table) == 0


@settings(max_examples=15, deadline=None)
@given(st.lists(rationals, min_size=10, max_size=10), st.integers(0, 2**30))
def test_eq17_property_random_structures(tvals, seed):
    rng = random.Random(seed)
    s, be = random_structure(rng, 1)
    from nordenlab import fundamental_tensor, nijenhuis

    fd = fundamental_tensor(s, be.levi_civita(), be)
    nd = nijenhuis(s, fd, be)
    t = TenParams.from_seq([Fraction(v) for v in tvals])
    assert eq17_residual(s, fd, nd, t) == 0


def test_q_ten_verify_catches_corrupted_f(ex_f5):
    from nordenlab.fundamental import FundamentalData

    fd = ex_f5.fund
    bad_comps = list(fd.f.comps)
    bad_comps[0] = bad_comps[0] + 1
    from nordenlab.tensor import FrameTensor

    bad_fd = FundamentalData(
        f=FrameTensor.from_flat(3, 3, bad_comps, "exact"),
        theta=fd.theta, theta_star=fd.theta_star, omega=fd.omega,
        theta_xi=fd.theta_xi, theta_star_xi=fd.theta_star_xi,
        xi_theta_xi=fd.xi_theta_xi, xi_theta_star_xi=fd.xi_theta_star_xi,
        dtheta_xi=fd.dtheta_xi, dtheta_star_xi=fd.dtheta_star_xi,
    )
    with pytest.raises(AlmostPhiError):
        q_ten_param(ex_f5.structure, bad_fd, zero_t())


# ---------------------------------------------------------------------------
# the 4-parameter family and the parameter maps


def test_four_param_at_zero_equals_base(ex_f4):
    sp = FourParamsS(F0, F0, F0, F0)
    q4 = q_four_param(ex_f4.structure, ex_f4.fund, sp, flags=ex_f4.classes)
    q10 = q_ten_param(ex_f4.structure, ex_f4.fund, zero_t())
    assert q4.q.comps == q10.q.comps


def test_four_param_matches_lifted_ten(ex_f45, rng):
    table = QMonomialTable(ex_f45.structure, ex_f45.fund)
    for _ in range(10):
        sp = FourParamsS(*[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)])
        q4 = q_four_param(ex_f45.structure, ex_f45.fund, sp, flags=ex_f45.classes)
        q10 = q_ten_param(ex_f45.structure, ex_f45.fund, sp.lift_to_ten(), table=table)
        assert q4.q.comps == q10.q.comps


def test_ten_to_four_map_consistency(ex_f45, rng):
    # on the normal/closed class, any t collapses to its s-image
    table = QMonomialTable(ex_f45.structure, ex_f45.fund)
    for _ in range(10):
        t = random_ten_params(rng)
        q10 = q_ten_param(ex_f45.structure, ex_f45.fund, t, table=table)
        q4 = q_four_param(ex_f45.structure, ex_f45.fund, t.to_four(), flags=ex_f45.classes)
        assert q10.q.comps == q4.q.comps


def test_four_param_class_gate(omega_generic):
    sp = FourParamsS(F1, F0, F0, F0)
    assert not omega_generic.classes.is_normal.value
    with pytest.raises(ClassViolationError):
        q_four_param(omega_generic.structure, omega_generic.fund, sp, flags=omega_generic.classes)
    q_four_param(omega_generic.structure, omega_generic.fund, sp, override=True)
    with pytest.raises(ClassViolationError):
        q_four_param(omega_generic.structure, omega_generic.fund, sp, flags=None)


# ---------------------------------------------------------------------------
# special connections


def test_natural_family_reduces_to_canonical_on_normal(ex_f4, ex_f5, rng):
    for pipe in (ex_f4, ex_f5):
        canon = base_deformation(pipe.structure, pipe.fund)
        for _ in range(5):
            p = FourParamsP(*[Fraction(rng.randint(-3, 3), 2) for _ in range(4)])
            dq = natural_family(pipe.structure, pipe.fund, pipe.nij, p, pipe.conn, pipe.backend)
            assert dq.q.comps == canon.q.comps


def test_natural_family_zero_params_metric_parallel(ex_f4):
    p = FourParamsP(F0, F0, F0, F0)
    dq = natural_family(ex_f4.structure, ex_f4.fund, ex_f4.nij, p, ex_f4.conn, ex_f4.backend)
    conn2 = apply_deformation(ex_f4.conn, dq)
    assert max_abs(nabla_tensor(conn2, ex_f4.structure.g, ex_f4.backend)) == 0


def test_natural_family_on_abelian_is_levi_civita(ex_flat, rng):
    p = FourParamsP(*[Fraction(rng.randint(-3, 3)) for _ in range(4)])
    dq = natural_family(ex_flat.structure, ex_flat.fund, ex_flat.nij, p, ex_flat.conn, ex_flat.backend)
    assert dq.q.is_zero()


def test_canonical_connection_spot_values(ex_f5, ex_flat, ex_f45):
    cc = canonical_connection(ex_f5.structure, ex_f5.conn, ex_f5.fund)
    assert all(cc.gamma.get(0, 2, k) == 0 for k in range(3))  # nabla''_{e1} xi = 0

    cc_flat = canonical_connection(ex_flat.structure, ex_flat.conn, ex_flat.fund)
    assert cc_flat.gamma.comps == ex_flat.conn.gamma.comps

    lm0 = f45_family(ex_f45.structure, ex_f45.conn, ex_f45.fund, LambdaMu(F0, F0),
                     flags=ex_f45.classes)
    cc45 = canonical_connection(ex_f45.structure, ex_f45.conn, ex_f45.fund)
    assert lm0.gamma.comps == cc45.gamma.comps


def test_canonical_connection_is_natural_on_normal(ex_f4, ex_f5, ex_f45):
    for pipe in (ex_f4, ex_f5, ex_f45):
        cc = canonical_connection(pipe.structure, pipe.conn, pipe.fund)
        flags = check_connection_flags(cc, pipe.structure, pipe.backend)
        assert flags["phi"] == 0 and flags["eta"] == 0 and flags["g"] == 0 and flags["xi"] == 0


def test_yano_connection_properties(ex_f5, ex_f4, ex_flat):
    for pipe in (ex_f5, ex_f4):
        yc = yano_connection(pipe.structure, pipe.conn, pipe.fund, flags=pipe.classes)
        assert torsion(yc, pipe.backend, pipe.structure.g).is_zero()
        assert check_connection_flags(yc, pipe.structure, pipe.backend)["phi"] == 0
    yc_flat = yano_connection(ex_flat.structure, ex_flat.conn, ex_flat.fund, flags=ex_flat.classes)
    assert yc_flat.gamma.comps == ex_flat.conn.gamma.comps


def test_yano_equals_four_param_special_values(ex_f5, ex_f45):
    sp = FourParamsS(F0, Fraction(1, 4), Fraction(-3, 4), F0)
    for pipe in (ex_f5, ex_f45):
        yc = yano_connection(pipe.structure, pipe.conn, pipe.fund, flags=pipe.classes)
        conn_sp = apply_deformation(
            pipe.conn, q_four_param(pipe.structure, pipe.fund, sp, flags=pipe.classes)
        )
        assert yc.gamma.comps == conn_sp.gamma.comps
        assert torsion(conn_sp, pipe.backend, pipe.structure.g).is_zero()


def test_f45_family_spot_values(ex_f5, ex_flat, rng):
    lm0 = f45_family(ex_f5.structure, ex_f5.conn, ex_f5.fund, LambdaMu(F0, F0),
                     flags=ex_f5.classes)
    assert all(lm0.gamma.get(0, 0, k) == 0 for k in range(3))  # nabla'_{e1} e1 = 0

    for _ in range(3):
        lm = LambdaMu(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
        cf = f45_family(ex_flat.structure, ex_flat.conn, ex_flat.fund, lm, flags=ex_flat.classes)
        assert cf.gamma.comps == ex_flat.conn.gamma.comps


def test_f45_yano_special_value(ex_f45):
    yc = yano_connection(ex_f45.structure, ex_f45.conn, ex_f45.fund, flags=ex_f45.classes)
    lm = f45_family(ex_f45.structure, ex_f45.conn, ex_f45.fund, LambdaMu(F0, -F1),
                    flags=ex_f45.classes)
    assert yc.gamma.comps == lm.gamma.comps


def test_f45_matches_four_param_through_lambda_mu(ex_f45, rng):
    for _ in range(10):
        sp = FourParamsS(*[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)])
        via_four = apply_deformation(
            ex_f45.conn, q_four_param(ex_f45.structure, ex_f45.fund, sp, flags=ex_f45.classes)
        )
        via_lm = f45_family(ex_f45.structure, ex_f45.conn, ex_f45.fund, sp.to_lambda_mu(),
                            flags=ex_f45.classes)
        assert via_four.gamma.comps == via_lm.gamma.comps


def test_f45_class_gate(omega_generic):
    with pytest.raises(ClassViolationError):
        f45_family(
            omega_generic.structure, omega_generic.conn, omega_generic.fund,
            LambdaMu(F0, F0), flags=omega_generic.classes,
        )


# ---------------------------------------------------------------------------
# torsion


def test_levi_civita_torsion_vanishes(ex_f5):
    assert torsion(ex_f5.conn, ex_f5.backend, ex_f5.structure.g).is_zero()


def test_eq19_matches_direct_torsion(ex_f4, ex_f5, rng):
    for pipe in (ex_f4, ex_f5):
        for _ in range(20):
            sp = FourParamsS(*[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)])
            conn2 = apply_deformation(
                pipe.conn, q_four_param(pipe.structure, pipe.fund, sp, flags=pipe.classes)
            )
            direct = torsion(conn2, pipe.backend, pipe.structure.g)
            formula = eq19_torsion(pipe.structure, pipe.fund, sp)
            assert direct.comps == formula.comps
            assert tensor_add(direct, permute(direct, (1, 0, 2))).is_zero()


def test_torsion_equals_antisymmetrized_deformation(ex_f45, rng):
    table = QMonomialTable(ex_f45.structure, ex_f45.fund)
    for _ in range(5):
        t = random_ten_params(rng)
        dq = q_ten_param(ex_f45.structure, ex_f45.fund, t, table=table)
        conn2 = apply_deformation(ex_f45.conn, dq)
        direct = torsion(conn2, ex_f45.backend, ex_f45.structure.g)
        antisym = tensor_sub(dq.q, permute(dq.q, (1, 0, 2)))
        assert direct.comps == antisym.comps


# ---------------------------------------------------------------------------
# parameter conditions


def test_parameter_condition_predicates():
    t = TenParams.from_seq([F1, -F1, F0, F0, F0, F0, F0, F0, F0, F0])
    assert parameter_conditions(t) == {"almost_contact": True, "natural": True}
    t = TenParams.from_seq([F1, F0, F0, F0, F0, F0, F0, F0, F1, F0])
    assert parameter_conditions(t) == {"almost_contact": True, "natural": False}
    t = TenParams.from_seq([F1] + [F0] * 9)
    assert parameter_conditions(t) == {"almost_contact": False, "natural": False}


def test_prop2_forward_zero_residuals(ex_f4, ex_f5, ex_f45, omega_generic, rng):
    for pipe in (ex_f4, ex_f5, ex_f45, omega_generic):
        table = QMonomialTable(pipe.structure, pipe.fund)
        p = FourParamsP(*[Fraction(rng.randint(-3, 3), 2) for _ in range(4)])
        t_nat = p.to_ten()
        dq = q_ten_param(pipe.structure, pipe.fund, t_nat, table=table)
        flags = check_connection_flags(apply_deformation(pipe.conn, dq), pipe.structure, pipe.backend)
        assert all(v == 0 for v in flags.values())

        vals = [Fraction(rng.randint(-3, 3), 2) for _ in range(8)]
        t_ac = TenParams.from_seq(vals + [vals[0] + vals[1], vals[2] + vals[3]])
        dq = q_ten_param(pipe.structure, pipe.fund, t_ac, table=table)
        flags = check_connection_flags(apply_deformation(pipe.conn, dq), pipe.structure, pipe.backend)
        assert flags["xi"] == 0 and flags["eta"] == 0 and flags["phi"] == 0


def test_prop2_converse_detectable_conditions(ex_f4, ex_f5):
    # on the bundled pure-class examples the t3/t5/t7 condition violations
    # are visible in nabla'g
    for pipe in (ex_f4, ex_f5):
        table = QMonomialTable(pipe.structure, pipe.fund)
        for idx in (2, 4, 6):
            t = [F0] * 10
            t[idx] = F1
            dq = q_ten_param(pipe.structure, pipe.fund, TenParams.from_seq(t), table=table)
            flags = check_connection_flags(apply_deformation(pipe.conn, dq), pipe.structure, pipe.backend)
            assert flags["g"] > 0


def test_prop2_converse_omega_gated_conditions_are_invisible_on_normal(ex_f4, ex_f5):
    # omega vanishes on every normal structure, so violations through the
    # t1, t9 or t10 conditions produce no measurable residual here; this
    # locks the degeneracy analysis in as a regression
    for pipe in (ex_f4, ex_f5):
        table = QMonomialTable(pipe.structure, pipe.fund)
        for idx in (0, 8, 9):
            t = [F0] * 10
            t[idx] = F1
            dq = q_ten_param(pipe.structure, pipe.fund, TenParams.from_seq(t), table=table)
            flags = check_connection_flags(apply_deformation(pipe.conn, dq), pipe.structure, pipe.backend)
            assert all(v == 0 for v in flags.values())


def test_prop2_converse_detectable_on_omega_generic(omega_generic):
    # with omega generic every singly-violated condition moves a residual
    pipe = omega_generic
    table = QMonomialTable(pipe.structure, pipe.fund)
    for idx, kinds in ((0, ("xi", "eta", "g")), (8, ("xi", "eta")), (9, ("xi", "eta"))):
        t = [F0] * 10
        t[idx] = F1
        dq = q_ten_param(pipe.structure, pipe.fund, TenParams.from_seq(t), table=table)
        flags = check_connection_flags(apply_deformation(pipe.conn, dq), pipe.structure, pipe.backend)
        for kind in kinds:
            assert flags[kind] > 0, (idx, kind, flags)


def test_eq16_metricity_route(ex_f45, rng):
    # nabla'g is exactly the negated symmetrized deformation
    table = QMonomialTable(ex_f45.structure, ex_f45.fund)
    for _ in range(5):
        t = random_ten_params(rng)
        dq = q_ten_param(ex_f45.structure, ex_f45.fund, t, table=table)
        conn2 = apply_deformation(ex_f45.conn, dq)
        nab_g = nabla_tensor(conn2, ex_f45.structure.g, ex_f45.backend)
        sym_q = tensor_add(dq.q, permute(dq.q, (0, 2, 1)))
        assert tensor_add(nab_g, sym_q).is_zero()


def test_f3f7_contract_on_ntilde_free_structure(ex_flat, rng):
    # with the associated Nijenhuis tensor zero and t1 = -t2, t3 = -t4 the
    # deformed connection stays metric (exercised through the identity on
    # the bundled candidate)
    assert ex_flat.classes.is_f3_plus_f7_candidate.value
    table = QMonomialTable(ex_flat.structure, ex_flat.fund)
    for _ in range(5):
        a, b = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
        rest = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
        t = TenParams.from_seq([a, -a, b, -b] + rest)
        dq = q_ten_param(ex_flat.structure, ex_flat.fund, t, table=table)
        conn2 = apply_deformation(ex_flat.conn, dq)
        assert max_abs(nabla_tensor(conn2, ex_flat.structure.g, ex_flat.backend)) == 0
