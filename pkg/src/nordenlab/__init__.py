"""Verification laboratory for linear connections on almost contact
manifolds with Norden metric.

The package constructs the deformation-tensor families of phi-parallel,
almost contact and natural connections on concrete desk-scale structures
(exact Lie-algebra frames or warped coordinate charts) and machine-checks
every identity, parameter condition, torsion formula and curvature
formula they satisfy.
"""

from .scalars import EXACT, FLOAT, parse_rational, parse_scalar
from .structure import (
    AcnStructure,
    StructureAxiomError,
    associated_metric,
    build_structure,
    canonical_structure,
    signature,
    validate_structure,
)
from .tensor import (
    DegenerateMetricError,
    FrameEndo,
    FrameTensor,
    ShapeError,
    contract,
    invert_metric,
    lower_endo,
    lower_slot,
    raise_endo,
    raise_slot,
)
from .geometry import (
    AntisymmetryError,
    ChartBackend,
    ChartData,
    ConnectionCoeffs,
    JacobiError,
    LieBackend,
    LieFrameData,
    WarpFunction,
    curvature,
    levi_civita_lie,
    nabla_tensor,
)
from .fundamental import (
    ClassReport,
    FundamentalData,
    NijenhuisData,
    classify,
    fundamental_tensor,
    nijenhuis,
)
from .connections import (
    DeformationQ,
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
from .curvature_lab import (
    PiBasis,
    check_curvature_like,
    curvature_via_deformation,
    phi_kaehler_residual,
    pi_basis,
    r_prime_formula_rhs,
    verify_r_prime_formula,
)

__version__ = "0.1.0"
