from fractions import Fraction

import pytest

from nordenlab import (
    DegenerateMetricError,
    FrameEndo,
    FrameTensor,
    StructureAxiomError,
    associated_metric,
    build_structure,
    canonical_structure,
    signature,
    validate_structure,
)
from nordenlab.structure import STATUS_FAIL

EX = "exact"


def test_canonical_n1_matrices():
    s = canonical_structure(1)
    assert [list(r) for r in s.phi.rows] == [
        [0, -1, 0],
        [1, 0, 0],
        [0, 0, 0],
    ]
    assert [s.g.get(i, i) for i in range(3)] == [1, -1, 1]
    assert all(s.g.get(i, j) == 0 for i in range(3) for j in range(3) if i != j)
    assert list(s.eta.comps) == [0, 0, 1]


def test_canonical_n2_validates_exactly():
    s = canonical_structure(2)
    assert [s.g.get(i, i) for i in range(5)] == [1, 1, -1, -1, 1]
    report = validate_structure(s)
    assert report.clean
    assert all(c.residual == 0 for c in report.checks)


def test_canonical_signature_matches_n():
    for n in (1, 2, 3):
        s = canonical_structure(n)
        assert signature(s.g) == (n + 1, n)
        assert validate_structure(s).signature == (n + 1, n)


def test_phi_square_axiom_rejects_uncorrected_complex_structure():
    # a phi that squares to -1 on a xi-containing plane violates the axiom
    phi = FrameEndo.from_rows(
        [
            [Fraction(0), Fraction(0), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(-1)],
            [Fraction(0), Fraction(1), Fraction(0)],
        ],
        EX,
    )
    s = canonical_structure(1)
    with pytest.raises(StructureAxiomError):
        build_structure(1, phi, s.g)


def test_validation_report_names_the_failure():
    phi = FrameEndo.from_rows(
        [
            [Fraction(0), Fraction(-1), Fraction(0)],
            [Fraction(1), Fraction(0), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1)],  # phi(xi) = xi
        ],
        EX,
    )
    s = canonical_structure(1)
    from nordenlab.structure import AcnStructure

    bad = AcnStructure(
        n=1, phi=phi, xi=s.xi, eta=s.eta, g=s.g, g_inv=s.g_inv, backend=EX
    )
    report = validate_structure(bad)
    assert report.check("phi_square").status == STATUS_FAIL
    assert report.check("phi_xi").status == STATUS_FAIL
    assert not report.accepted


def test_inconsistent_eta_rejected():
    s = canonical_structure(1)
    bad_eta = FrameTensor.from_flat(3, 1, [Fraction(1), Fraction(0), Fraction(1)], EX)
    with pytest.raises(StructureAxiomError):
        build_structure(1, s.phi, s.g, eta=bad_eta)


def test_consistent_eta_accepted():
    s = canonical_structure(1)
    rebuilt = build_structure(1, s.phi, s.g, eta=s.eta)
    assert rebuilt.eta.comps == s.eta.comps


def test_associated_metric_values_n1():
    s = canonical_structure(1)
    gt = associated_metric(s)
    # g~(e1, e2) = g(e1, phi e2) = g(e1, -e1) = -1; g~(xi, xi) = 1
    assert gt.get(0, 1) == -1
    assert gt.get(1, 0) == -1
    assert gt.get(2, 2) == 1
    assert gt.get(0, 0) == 0 and gt.get(1, 1) == 0


def test_associated_metric_is_norden_again():
    from nordenlab.tensor import apply_endo, max_abs, outer, tensor_add, tensor_sub

    for n in (1, 2, 3):
        s = canonical_structure(n)
        gt = associated_metric(s)
        gt_pp = apply_endo(apply_endo(gt, s.phi, 0), s.phi, 1)
        resid = tensor_sub(tensor_add(gt_pp, gt), outer(s.eta, s.eta))
        assert max_abs(resid) == 0
        # xi stays unit-length for the associated metric
        assert gt.get(s.dim - 1, s.dim - 1) == 1


def test_signature_handles_zero_diagonal_pivots():
    g = FrameTensor.from_flat(
        3, 2,
        [Fraction(0), Fraction(1), Fraction(0),
         Fraction(1), Fraction(0), Fraction(0),
         Fraction(0), Fraction(0), Fraction(1)],
        EX,
    )
    assert signature(g) == (2, 1)


def test_signature_rejects_degenerate():
    g = FrameTensor.from_flat(
        3, 2,
        [Fraction(1), Fraction(0), Fraction(0),
         Fraction(0), Fraction(0), Fraction(0),
         Fraction(0), Fraction(0), Fraction(1)],
        EX,
    )
    with pytest.raises(DegenerateMetricError):
        signature(g)


def test_wrong_signature_metric_rejected_as_structure():
    # diag(1, 1, 1) with the canonical phi is not a Norden metric
    s = canonical_structure(1)
    g = FrameTensor.from_flat(
        3, 2,
        [Fraction(1), Fraction(0), Fraction(0),
         Fraction(0), Fraction(1), Fraction(0),
         Fraction(0), Fraction(0), Fraction(1)],
        EX,
    )
    with pytest.raises(StructureAxiomError):
        build_structure(1, s.phi, g)


def test_float_backend_canonical_structure():
    s = canonical_structure(2, "float")
    report = validate_structure(s)
    assert report.clean
    assert signature(s.g) == (3, 2)
