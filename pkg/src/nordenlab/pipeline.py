"""One-stop computation of the geometry snapshot for an example, plus the
chart-side field closures needed to differentiate deformed connections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .connections import (
    DeformationQ,
    LambdaMu,
    apply_deformation,
    f45_deformation,
)
from .fundamental import (
    ClassReport,
    FundamentalData,
    NijenhuisData,
    classify,
    fundamental_tensor,
    nijenhuis,
)
from .geometry import ConnectionCoeffs, curvature
from .structure import AcnStructure
from .tensor import FrameTensor, tensor_add


@dataclass(frozen=True)
class Pipeline:
    """Computed snapshot: structure, backend, Levi-Civita connection,
    fundamental data, Nijenhuis data and class flags."""

    structure: AcnStructure
    backend: object
    conn: ConnectionCoeffs
    fund: FundamentalData
    nij: NijenhuisData
    classes: ClassReport

    @property
    def is_chart(self) -> bool:
        return hasattr(self.backend, "rebased")


def compute_pipeline(structure: AcnStructure, backend, tol: Optional[float] = None) -> Pipeline:
    conn = backend.levi_civita()
    fund = fundamental_tensor(structure, conn, backend, tol=tol)
    nij = nijenhuis(structure, fund, backend, tol=tol)
    classes = classify(structure, fund, nij, tol=tol)
    return Pipeline(structure, backend, conn, fund, nij, classes)


def levi_civita_curvature(pipe: Pipeline) -> FrameTensor:
    return curvature(pipe.conn, pipe.backend, pipe.structure.g)


# ---------------------------------------------------------------------------
# chart field closures: every quantity as a function of the chart point


def _snapshot_at(pipe: Pipeline, point):
    be = pipe.backend.rebased(point)
    conn = be.levi_civita()
    fund = fundamental_tensor(be.structure, conn, be, with_derivatives=False)
    return be, conn, fund


def f45_q_field(pipe: Pipeline, lm: LambdaMu) -> Callable:
    """Chart field of the 2-parameter deformation's (0,3) component."""

    def field(point):
        be, conn, fund = _snapshot_at(pipe, point)
        return f45_deformation(be.structure, fund, lm).q

    return field


def f45_connection(pipe: Pipeline, lm: LambdaMu, override: bool = False) -> ConnectionCoeffs:
    """The 2-parameter family member on either backend; on charts the
    returned coefficients carry a field for finite differencing."""
    from .connections import f45_family

    conn2 = f45_family(
        pipe.structure, pipe.conn, pipe.fund, lm, flags=pipe.classes, override=override
    )
    if not pipe.is_chart:
        return conn2

    def gamma_field(point):
        be, conn, fund = _snapshot_at(pipe, point)
        dq = f45_deformation(be.structure, fund, lm)
        return tensor_add(conn.gamma, dq.q_mixed)

    return ConnectionCoeffs(conn2.dim, conn2.gamma, conn2.provenance, field=gamma_field)


def f45_curvature_pair(pipe: Pipeline, lm: LambdaMu, override: bool = False):
    """(R of Levi-Civita, R' of the family member) on the pipeline's
    backend, with direct computation for both."""
    r = levi_civita_curvature(pipe)
    conn2 = f45_connection(pipe, lm, override=override)
    r2 = curvature(conn2, pipe.backend, pipe.structure.g)
    return r, r2


def f45_deformation_of(pipe: Pipeline, lm: LambdaMu) -> DeformationQ:
    return f45_deformation(pipe.structure, pipe.fund, lm)
