from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nordenlab import (
    DegenerateMetricError,
    FrameEndo,
    FrameTensor,
    ShapeError,
    canonical_structure,
    contract,
    invert_metric,
    lower_endo,
    raise_endo,
)
from nordenlab.connections import base_deformation
from nordenlab.pipeline import compute_pipeline
from nordenlab.registry import build_example
from nordenlab.tensor import (
    apply_endo,
    kronecker,
    lower_slot,
    max_abs,
    outer,
    permute,
    plug_vector,
    raise_slot,
    tensor_add,
    tensor_sub,
    trace_pair,
)

from oracles import (
    brackets_from_triples,
    canonical_g,
    canonical_phi,
    fundamental_oracle,
    lc_from_defining_system,
)

EX = "exact"

rationals = st.fractions(
    min_value=Fraction(-6), max_value=Fraction(6), max_denominator=4
)


def frt(dim, order, vals):
    return FrameTensor.from_flat(dim, order, [Fraction(v) for v in vals], EX)


def test_identity_trace_is_dimension():
    s = canonical_structure(1)
    delta = contract(s.g_inv, s.g, 0, 0)
    assert delta.comps == kronecker(3, EX).comps
    assert trace_pair(delta, 0, 1).comps[0] == 3


def test_inverse_times_metric_is_kronecker():
    for n in (1, 2):
        s = canonical_structure(n)
        assert contract(s.g_inv, s.g, 0, 0).comps == kronecker(s.dim, EX).comps


def test_theta_xi_by_double_contraction_matches_oracle():
    # F of the pure-rotation example, then theta(xi) = g^{ij} F(e_i, e_j, xi)
    beta = Fraction(1)
    dim = 3
    phi, g = canonical_phi(1), canonical_g(1)
    c = brackets_from_triples(dim, [(2, 0, 1, beta), (2, 1, 0, -beta)])
    gamma = lc_from_defining_system(dim, c, g)
    f_arr = fundamental_oracle(dim, gamma, phi, g)
    f = frt(dim, 3, [f_arr[i][j][k] for i in range(dim) for j in range(dim) for k in range(dim)])

    s = canonical_structure(1)
    contracted = contract(s.g_inv, f, 0, 0)      # slots (j | y, z)
    theta = trace_pair(contracted, 0, 1)
    assert plug_vector(theta, s.xi, 0).comps[0] == -2 * beta


def test_invert_diag_involution():
    g = frt(3, 2, [1, 0, 0, 0, -1, 0, 0, 0, 1])
    assert invert_metric(g).comps == g.comps
    s2 = canonical_structure(2)
    assert invert_metric(s2.g).comps == s2.g.comps


def test_invert_random_rational_symmetric():
    import random

    rng = random.Random(3)
    for _ in range(10):
        entries = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        sym = [[entries[i][j] + entries[j][i] for j in range(3)] for i in range(3)]
        g = frt(3, 2, [sym[i][j] for i in range(3) for j in range(3)])
        try:
            g_inv = invert_metric(g)
        except DegenerateMetricError:
            continue
        assert contract(g_inv, g, 0, 0).comps == kronecker(3, EX).comps


def test_singular_metric_raises():
    g = frt(3, 2, [1, 0, 0, 0, 0, 0, 0, 0, 1])
    with pytest.raises(DegenerateMetricError):
        invert_metric(g)


def test_contract_shape_errors():
    a = FrameTensor.zeros(3, 2, EX)
    b = FrameTensor.zeros(5, 2, EX)
    with pytest.raises(ShapeError):
        contract(a, b, 0, 0)
    with pytest.raises(ShapeError):
        contract(a, a, 2, 0)


def test_lower_phi_is_symmetric():
    s = canonical_structure(1)
    low = lower_endo(s.phi, s.g)
    assert low.comps == permute(low, (1, 0)).comps


def test_raise_lower_roundtrip_random_endo():
    import random

    rng = random.Random(5)
    s = canonical_structure(1)
    for _ in range(10):
        rows = [[Fraction(rng.randint(-4, 4)) for _ in range(3)] for _ in range(3)]
        e = FrameEndo.from_rows(rows, EX)
        back = raise_endo(lower_endo(e, s.g), s.g_inv)
        assert back.rows == e.rows


def test_lower_raised_base_deformation_spot_value():
    # Q(e1, e1, xi) = -alpha for the parameter-free deformation
    pipe = compute_pipeline(*build_example("ex-f5"))
    dq = base_deformation(pipe.structure, pipe.fund)
    assert dq.q.get(0, 0, 2) == Fraction(-1)
    relowered = lower_slot(dq.q_mixed, pipe.structure.g, 2)
    assert relowered.comps == dq.q.comps


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=18, max_size=18), st.lists(rationals, min_size=9, max_size=9))
def test_contract_is_multilinear(avals, bvals):
    a = frt(3, 2, avals[:9])
    a2 = frt(3, 2, avals[9:])
    b = frt(3, 2, bvals)
    lhs = contract(tensor_add(a, a2), b, 1, 0)
    rhs = tensor_add(contract(a, b, 1, 0), contract(a2, b, 1, 0))
    assert lhs.comps == rhs.comps


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6))
def test_double_inverse_is_identity(upper):
    # build a symmetric matrix from the upper triangle
    g = frt(
        3, 2,
        [upper[0], upper[1], upper[2],
         upper[1], upper[3], upper[4],
         upper[2], upper[4], upper[5]],
    )
    try:
        g_inv = invert_metric(g)
    except DegenerateMetricError:
        return
    assert invert_metric(g_inv).comps == g.comps


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=27, max_size=27))
def test_raise_lower_slot_roundtrip(vals):
    s = canonical_structure(1)
    t = frt(3, 3, vals)
    assert lower_slot(raise_slot(t, s.g_inv, 2), s.g, 2).comps == t.comps
    assert lower_slot(raise_slot(t, s.g_inv, 0), s.g, 0).comps == t.comps


def test_apply_endo_matches_plugging_images():
    s = canonical_structure(1)
    t = frt(3, 2, range(9))
    ap = apply_endo(t, s.phi, 1)
    for x in range(3):
        for y in range(3):
            image = [s.phi.rows[m][y] for m in range(3)]
            want = sum(image[m] * t.get(x, m) for m in range(3))
            assert ap.get(x, y) == want


def test_outer_and_permute_compose():
    a = frt(3, 1, [1, 2, 3])
    b = frt(3, 1, [5, 7, 11])
    prod = outer(a, b)
    assert prod.get(1, 2) == 2 * 11
    swapped = permute(prod, (1, 0))
    assert swapped.get(2, 1) == prod.get(1, 2)


def test_tensors_are_immutable():
    t = FrameTensor.zeros(3, 2, EX)
    with pytest.raises(Exception):
        t.comps = ()
    with pytest.raises(TypeError):
        t.comps[0] = 1


def test_max_abs_and_nonzero_count():
    from nordenlab.tensor import nonzero_count

    t = frt(3, 1, [0, -5, 2])
    assert max_abs(t) == 5
    assert nonzero_count(t) == 2
