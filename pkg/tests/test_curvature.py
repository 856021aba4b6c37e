import random
from fractions import Fraction

import pytest

from nordenlab import (
    LambdaMu,
    canonical_structure,
    check_curvature_like,
    curvature,
    curvature_via_deformation,
    f45_family,
    phi_kaehler_residual,
    pi_basis,
    r_prime_formula_rhs,
    verify_r_prime_formula,
)
from nordenlab.connections import base_deformation, canonical_connection, f45_deformation
from nordenlab.curvature_lab import CurvaturePathError, xi_slot_residual
from nordenlab.pipeline import (
    compute_pipeline,
    f45_curvature_pair,
    f45_deformation_of,
    f45_q_field,
    levi_civita_curvature,
)
from nordenlab.registry import build_example
from nordenlab.tensor import max_abs, tensor_add, tensor_scale, tensor_sub

F0, F1 = Fraction(0), Fraction(1)


def test_pi_basis_spot_values():
    s = canonical_structure(1)
    pis = pi_basis(s)
    # pi1(e1, e2, e2, e1) = g(e2,e2) g(e1,e1) - g(e1,e2) g(e2,e1)
    assert pis.pi1.get(0, 1, 1, 0) == -1
    # pi4(e1, xi, xi, e1) = 1 via the g(e1,e1) eta(xi)^2 term
    assert pis.pi4.get(0, 2, 2, 0) == 1


def test_pi_basis_curvature_like_at_both_dims():
    for n in (1, 2):
        s = canonical_structure(n)
        pis = pi_basis(s, check=False)
        for name, t in pis.as_dict().items():
            c = check_curvature_like(t)
            assert c.antisym_xy == 0 and c.antisym_zu == 0 and c.bianchi == 0, name


def test_zero_deformation_keeps_curvature(ex_f5):
    r = levi_civita_curvature(ex_f5)
    from nordenlab.connections import DeformationQ
    from nordenlab.tensor import FrameTensor

    zero_q = DeformationQ(
        q=FrameTensor.zeros(3, 3, "exact"), q_mixed=FrameTensor.zeros(3, 3, "exact")
    )
    r2 = curvature_via_deformation(r, zero_q, ex_f5.conn, ex_f5.backend, ex_f5.structure.g)
    assert r2.comps == r.comps


def test_eq24_path_equality_canonical(ex_f5, ex_f45):
    for pipe in (ex_f5, ex_f45):
        r = levi_civita_curvature(pipe)
        dq = base_deformation(pipe.structure, pipe.fund)
        conn2 = canonical_connection(pipe.structure, pipe.conn, pipe.fund)
        direct = curvature(conn2, pipe.backend, pipe.structure.g)
        via = curvature_via_deformation(
            r, dq, pipe.conn, pipe.backend, pipe.structure.g, direct=direct
        )
        assert via.comps == direct.comps


def test_eq24_path_equality_random_lambda_mu(ex_f45, rng):
    r = levi_civita_curvature(ex_f45)
    for _ in range(10):
        lm = LambdaMu(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                      Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        conn2 = f45_family(ex_f45.structure, ex_f45.conn, ex_f45.fund, lm, flags=ex_f45.classes)
        direct = curvature(conn2, ex_f45.backend, ex_f45.structure.g)
        dq = f45_deformation(ex_f45.structure, ex_f45.fund, lm)
        via = curvature_via_deformation(
            r, dq, ex_f45.conn, ex_f45.backend, ex_f45.structure.g, direct=direct
        )
        assert via.comps == direct.comps


def test_eq24_mismatch_detected(ex_f5):
    r = levi_civita_curvature(ex_f5)
    dq = base_deformation(ex_f5.structure, ex_f5.fund)
    wrong = tensor_scale(r, Fraction(2))
    with pytest.raises(CurvaturePathError):
        curvature_via_deformation(
            r, dq, ex_f5.conn, ex_f5.backend, ex_f5.structure.g, direct=tensor_add(wrong, r)
        )


def test_eq25_scaling_example_spot(ex_f5):
    # R' = R + alpha^2 pi1 at lambda = mu = 0; R'(e1, xi, xi, e1) = 0
    pipe = ex_f5
    r = levi_civita_curvature(pipe)
    conn2 = canonical_connection(pipe.structure, pipe.conn, pipe.fund)
    r2 = curvature(conn2, pipe.backend, pipe.structure.g)
    pis = pi_basis(pipe.structure)
    want = tensor_add(r, tensor_scale(pis.pi1, F1))  # alpha = 1
    assert r2.comps == want.comps
    assert r.get(0, 2, 2, 0) == -1
    assert r2.get(0, 2, 2, 0) == 0


def test_eq25_rotation_example_structure(ex_f4, rng):
    # R' = R + beta^2 (pi2 - pi4) for every (lambda, mu)
    pipe = ex_f4
    r = levi_civita_curvature(pipe)
    pis = pi_basis(pipe.structure)
    want = tensor_add(r, tensor_sub(pis.pi2, pis.pi4))  # beta = 1
    for _ in range(3):
        lm = LambdaMu(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
        conn2 = f45_family(pipe.structure, pipe.conn, pipe.fund, lm, flags=pipe.classes)
        r2 = curvature(conn2, pipe.backend, pipe.structure.g)
        assert r2.comps == want.comps


@pytest.mark.parametrize("value", [F1, Fraction(1, 2), Fraction(-2)])
def test_eq25_exact_across_parameter_values(value, rng):
    for name, kw in (
        ("ex-f4", {"beta": value}),
        ("ex-f5", {"alpha": value}),
        ("ex-f45", {"alpha": value, "beta": value}),
    ):
        pipe = compute_pipeline(*build_example(name, **kw))
        pis = pi_basis(pipe.structure)
        r = levi_civita_curvature(pipe)
        for _ in range(4):
            lm = LambdaMu(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                          Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            conn2 = f45_family(pipe.structure, pipe.conn, pipe.fund, lm, flags=pipe.classes)
            r2 = curvature(conn2, pipe.backend, pipe.structure.g)
            rep = verify_r_prime_formula(pipe.structure, pipe.fund, r, r2, pis)
            assert rep.formula_residual == 0
            assert rep.phi_kaehler_residual == 0
            assert rep.xi_slot_residual == 0
            assert rep.curvature_like.bianchi == 0


def test_abelian_curvature_trivial(ex_flat):
    r = levi_civita_curvature(ex_flat)
    assert r.is_zero()
    conn2 = canonical_connection(ex_flat.structure, ex_flat.conn, ex_flat.fund)
    assert curvature(conn2, ex_flat.backend, ex_flat.structure.g).is_zero()
    assert ex_flat.fund.theta_xi == 0 and ex_flat.fund.theta_star_xi == 0


def test_phi_kaehler_forces_xi_slot_to_vanish(ex_f45, rng):
    pipe = ex_f45
    r = levi_civita_curvature(pipe)
    lm = LambdaMu(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
    conn2 = f45_family(pipe.structure, pipe.conn, pipe.fund, lm, flags=pipe.classes)
    r2 = curvature(conn2, pipe.backend, pipe.structure.g)
    assert phi_kaehler_residual(r2, pipe.structure) == 0
    assert xi_slot_residual(r2, pipe.structure) == 0
    # the Levi-Civita curvature of this example is NOT phi-Kaehler-type
    assert phi_kaehler_residual(r, pipe.structure) > 0


def test_formula_rhs_preserves_curvature_like(ex_f45, rng):
    # R + scalar combinations of the basis stays curvature-like
    pipe = ex_f45
    r = levi_civita_curvature(pipe)
    pis = pi_basis(pipe.structure)
    from nordenlab.tensor import tensor_combine

    for _ in range(5):
        coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(5)]
        candidate = tensor_combine(r, list(zip(coeffs, pis.as_dict().values())))
        c = check_curvature_like(candidate)
        assert c.antisym_xy == 0 and c.antisym_zu == 0 and c.bianchi == 0


# ---------------------------------------------------------------------------
# chart backend


def test_eq25_on_poly_chart_at_bundled_point(ex_chart_poly):
    # finite-difference pipeline at t = 1 with the xi-derivative taken by
    # central differences; the derivative term itself is tiny there but
    # float-nonzero, and the closed form holds well inside 1e-5
    pipe = ex_chart_poly
    assert pipe.fund.xi_theta_star_xi != 0.0
    pis = pi_basis(pipe.structure, tol=1e-6)
    r, r2 = f45_curvature_pair(pipe, LambdaMu(0.0, 0.0))
    rep = verify_r_prime_formula(pipe.structure, pipe.fund, r, r2, pis)
    assert rep.formula_residual < 1e-5
    assert rep.phi_kaehler_residual < 1e-9
    assert rep.xi_slot_residual < 1e-9


def test_eq25_on_poly_chart_with_generic_xi_derivative():
    # at t = 1/2 the xi-derivative coefficient is genuinely of order one,
    # so this exercises the pi4 term of the closed form substantively
    s, be = build_example("ex-chart-poly", t=0.5)
    pipe = compute_pipeline(s, be)
    assert abs(pipe.fund.xi_theta_star_xi + 1.92) < 1e-4
    pis = pi_basis(pipe.structure, tol=1e-6)
    for lm in (LambdaMu(0.0, 0.0), LambdaMu(0.5, -0.25)):
        r, r2 = f45_curvature_pair(pipe, lm)
        rep = verify_r_prime_formula(pipe.structure, pipe.fund, r, r2, pis)
        assert rep.formula_residual < 1e-5


def test_eq24_on_chart(ex_chart_exp):
    pipe = ex_chart_exp
    r = levi_civita_curvature(pipe)
    lm = LambdaMu(0.25, -0.5)
    from nordenlab.pipeline import f45_connection

    conn2 = f45_connection(pipe, lm)
    direct = curvature(conn2, pipe.backend, pipe.structure.g)
    dq = f45_deformation_of(pipe, lm)
    via = curvature_via_deformation(
        r, dq, pipe.conn, pipe.backend, pipe.structure.g,
        q_field=f45_q_field(pipe, lm), direct=direct, tol=1e-5,
    )
    assert max_abs(tensor_sub(via, direct)) < 1e-5
