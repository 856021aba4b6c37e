"""Almost contact structures with Norden metric on a fixed frame.

The quadruple (phi, xi, eta, g) lives on a (2n+1)-dimensional frame with
xi as the last basis vector.  eta is always derived as g(., xi); a
user-supplied eta that disagrees is rejected.  Structures are validated
componentwise against the defining axioms

    phi^2 x = -x + eta(x) xi,   eta(xi) = 1,
    g(phi x, phi y) = -g(x, y) + eta(x) eta(y),

together with the derived identities phi(xi) = 0, eta(phi x) = 0,
eta(x) = g(x, xi), g(phi x, y) = g(x, phi y), and the exact signature
requirement (n+1, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .scalars import EXACT, FLOAT, Scalar, one, zero
from .tensor import (
    DegenerateMetricError,
    FrameEndo,
    FrameTensor,
    ShapeError,
    apply_endo,
    invert_metric,
    lower_endo,
    max_abs,
    nonzero_count,
    outer,
    plug_vector,
    tensor_add,
    tensor_sub,
)

# float-backend validation thresholds: below ACCEPT is a pass, above
# REJECT is a failure, in between is a warning (finite-difference noise).
ACCEPT_TOL = 1e-9
REJECT_TOL = 1e-6

STATUS_PASS = "pass"
STATUS_WARN = "warn"
STATUS_FAIL = "fail"


class StructureAxiomError(ValueError):
    """A supplied structure violates one of the defining axioms."""


@dataclass(frozen=True)
class AcnStructure:
    """Almost contact structure with Norden metric in frame components."""

    n: int
    phi: FrameEndo
    xi: tuple
    eta: FrameTensor
    g: FrameTensor
    g_inv: FrameTensor
    backend: str

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def eta_of(self, vec: Sequence[Scalar]) -> Scalar:
        acc = zero(self.backend)
        for c, e in zip(vec, self.eta.comps):
            if c != 0 and e != 0:
                acc = acc + c * e
        return acc


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    residual: Scalar
    exact_nonzero: Optional[int]
    status: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    signature: Optional[tuple]

    @property
    def accepted(self) -> bool:
        return all(c.status != STATUS_FAIL for c in self.checks)

    @property
    def clean(self) -> bool:
        return all(c.status == STATUS_PASS for c in self.checks)

    def check(self, name: str) -> ValidationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _status(residual: Scalar, backend: str) -> str:
    if backend == EXACT:
        return STATUS_PASS if residual == 0 else STATUS_FAIL
    if abs(residual) < ACCEPT_TOL:
        return STATUS_PASS
    if abs(residual) > REJECT_TOL:
        return STATUS_FAIL
    return STATUS_WARN


def canonical_structure(n: int, backend: str = EXACT) -> AcnStructure:
    """The flat-frame model: phi(e_i) = e_{n+i}, phi(e_{n+i}) = -e_i,
    phi(xi) = 0, g = diag(+1 x n, -1 x n, +1), eta = g(., xi)."""
    if n < 1:
        raise ShapeError(f"n must be >= 1, got {n}")
    dim = 2 * n + 1
    o, z = one(backend), zero(backend)
    rows = [[z] * dim for _ in range(dim)]
    for i in range(n):
        rows[n + i][i] = o
        rows[i][n + i] = -o
    phi = FrameEndo(dim, tuple(tuple(r) for r in rows), backend)
    diag = [o] * n + [-o] * n + [o]
    g = FrameTensor(
        dim, 2, tuple(diag[i] if i == j else z for i in range(dim) for j in range(dim)), backend
    )
    xi = tuple(z if i < dim - 1 else o for i in range(dim))
    return build_structure(n, phi, g, xi=xi, backend=backend)


def build_structure(
    n: int,
    phi: FrameEndo,
    g: FrameTensor,
    xi: Optional[Sequence[Scalar]] = None,
    eta: Optional[FrameTensor] = None,
    backend: str = EXACT,
) -> AcnStructure:
    """Assemble and validate a structure; eta is derived from g and xi.

    A caller-supplied eta is only checked for consistency and rejected on
    mismatch.  Raises StructureAxiomError or DegenerateMetricError.
    """
    dim = 2 * n + 1
    if phi.dim != dim or g.dim != dim:
        raise ShapeError("phi/g dimension does not match n")
    if xi is None:
        xi = tuple(zero(backend) if i < dim - 1 else one(backend) for i in range(dim))
    xi = tuple(xi)
    derived_eta = plug_vector(g, xi, 0)
    if eta is not None:
        diff = tensor_sub(eta, derived_eta)
        if _status(max_abs(diff), backend) == STATUS_FAIL:
            raise StructureAxiomError("supplied eta disagrees with g(., xi)")
    g_inv = invert_metric(g)
    s = AcnStructure(n=n, phi=phi, xi=xi, eta=derived_eta, g=g, g_inv=g_inv, backend=backend)
    report = validate_structure(s)
    if not report.accepted:
        bad = [c.name for c in report.checks if c.status == STATUS_FAIL]
        raise StructureAxiomError(f"structure axioms violated: {', '.join(bad)}")
    return s


def validate_structure(s: AcnStructure) -> ValidationReport:
    """Residual report for every structure axiom, plus the exact signature."""
    checks = []

    def record(name: str, tensor_residual: FrameTensor):
        residual = max_abs(tensor_residual)
        count = nonzero_count(tensor_residual) if s.backend == EXACT else None
        checks.append(ValidationCheck(name, residual, count, _status(residual, s.backend)))

    dim = s.dim
    backend = s.backend

    # phi^2 + id - eta (x) xi = 0, as an endomorphism residual
    phi2 = s.phi.compose(s.phi)
    ident = FrameEndo.identity(dim, backend)
    resid = []
    for m in range(dim):
        for a in range(dim):
            resid.append(phi2.rows[m][a] + ident.rows[m][a] - s.eta.comps[a] * s.xi[m])
    record("phi_square", FrameTensor(dim, 2, tuple(resid), backend))

    # eta(xi) = 1
    eta_xi = s.eta_of(s.xi) - one(backend)
    record("eta_xi", FrameTensor(dim, 0, (eta_xi,), backend))

    # g(phi x, phi y) + g(x, y) - eta(x) eta(y) = 0
    g_phiphi = apply_endo(apply_endo(s.g, s.phi, 0), s.phi, 1)
    norden = tensor_sub(tensor_add(g_phiphi, s.g), outer(s.eta, s.eta))
    record("norden_metric", norden)

    # phi(xi) = 0
    record("phi_xi", FrameTensor(dim, 1, s.phi.apply(s.xi), backend))

    # eta(phi x) = 0
    record("eta_phi", apply_endo(s.eta, s.phi, 0))

    # g symmetric
    sym = FrameTensor.from_function(dim, 2, lambda i, j: s.g.get(i, j) - s.g.get(j, i), backend)
    record("g_symmetric", sym)

    # g(phi x, y) = g(x, phi y)
    gphix = apply_endo(s.g, s.phi, 0)
    gxphiy = apply_endo(s.g, s.phi, 1)
    record("phi_g_symmetric", tensor_sub(gphix, gxphiy))

    # eta matches g(., xi) by construction; keep the residual visible anyway
    record("eta_from_g", tensor_sub(s.eta, plug_vector(s.g, s.xi, 0)))

    try:
        sig = signature(s.g)
        sig_ok = sig == (s.n + 1, s.n)
    except DegenerateMetricError:
        sig = None
        sig_ok = False
    one_ = one(backend)
    sig_residual = zero(backend) if sig_ok else one_
    count = (0 if sig_ok else 1) if backend == EXACT else None
    checks.append(
        ValidationCheck("signature", sig_residual, count, STATUS_PASS if sig_ok else STATUS_FAIL)
    )

    return ValidationReport(tuple(checks), sig)


def signature(g: FrameTensor) -> tuple:
    """(positive, negative) inertia by congruence diagonalization.

    Exact on the rational backend (Sylvester's law, no eigenvalues); on
    the float backend pivots below 1e-12 raise DegenerateMetricError.
    """
    if g.order != 2:
        raise ShapeError("signature expects an order-2 tensor")
    d = g.dim
    backend = g.backend
    rows = [[g.get(i, j) for j in range(d)] for i in range(d)]
    tol = 0 if backend == EXACT else 1e-12

    def is_zero(v):
        return v == 0 if backend == EXACT else abs(v) <= tol

    pos = neg = 0
    for k in range(d):
        if is_zero(rows[k][k]):
            # basis change v_k := v_k + s*v_j brings a nonzero onto the diagonal
            j = next((j for j in range(k + 1, d) if not is_zero(rows[k][j])), None)
            if j is None:
                raise DegenerateMetricError("metric is degenerate")
            cand_plus = rows[k][k] + 2 * rows[k][j] + rows[j][j]
            cand_minus = rows[k][k] - 2 * rows[k][j] + rows[j][j]
            sign = 1 if abs(cand_plus) >= abs(cand_minus) else -1
            new_kk = cand_plus if sign == 1 else cand_minus
            for c in range(d):
                if c != k:
                    rows[k][c] = rows[k][c] + sign * rows[j][c]
            for r in range(d):
                if r != k:
                    rows[r][k] = rows[r][k] + sign * rows[r][j]
            rows[k][k] = new_kk
        piv = rows[k][k]
        if is_zero(piv):
            raise DegenerateMetricError("metric is degenerate")
        if piv > 0:
            pos += 1
        else:
            neg += 1
        # one symmetric (Schur-complement) elimination step
        for i in range(k + 1, d):
            f = rows[i][k] / piv
            if f != 0:
                for j in range(k + 1, d):
                    rows[i][j] = rows[i][j] - f * rows[k][j]
        for i in range(k + 1, d):
            rows[i][k] = zero(backend)
            rows[k][i] = zero(backend)
    return pos, neg


def associated_metric(s: AcnStructure) -> FrameTensor:
    """g~(x, y) = g(x, phi y) + eta(x) eta(y); re-verified to be a Norden
    metric for the same (phi, xi, eta)."""
    g_tilde = tensor_add(apply_endo(s.g, s.phi, 1), outer(s.eta, s.eta))
    # Norden property of g~ itself
    gt_phiphi = apply_endo(apply_endo(g_tilde, s.phi, 0), s.phi, 1)
    residual = max_abs(tensor_sub(tensor_add(gt_phiphi, g_tilde), outer(s.eta, s.eta)))
    if _status(residual, s.backend) == STATUS_FAIL:
        raise StructureAxiomError("associated metric fails the Norden property")
    return g_tilde
