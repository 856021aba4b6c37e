"""Deformation-tensor families of linear connections on almost contact
Norden-metric structures.

Every family is built as a (0,3) deformation Q with
g(nabla'_x y - nabla_x y, z) = Q(x,y,z).  The 10-parameter family is kept
as a table of primitive monomials in F, eta and omega so that parameter
sweeps are linear combinations of precomputed tensors and each term can
be audited against its display line by line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fundamental import FundamentalData, NijenhuisData, _eta_on_slot, _f_from_connection
from .geometry import ConnectionCoeffs, nabla_tensor, torsion_tensor
from .scalars import EXACT, Scalar, half, zero
from .structure import AcnStructure
from .tensor import (
    FrameTensor,
    apply_endo,
    max_abs,
    outer,
    permute,
    plug_vector,
    raise_slot,
    tensor_add,
    tensor_combine,
    tensor_scale,
    tensor_sub,
)


class AlmostPhiError(ValueError):
    """The deformation fails the phi-parallelism condition; inputs are
    inconsistent (the construction guarantees it for all parameters)."""


class ClassViolationError(ValueError):
    """A family was requested on a structure outside its class
    precondition; pass override=True to evaluate it anyway."""


class NaturalityError(ValueError):
    """The natural family failed its direct parallelism verification."""


@dataclass(frozen=True)
class TenParams:
    t1: Scalar
    t2: Scalar
    t3: Scalar
    t4: Scalar
    t5: Scalar
    t6: Scalar
    t7: Scalar
    t8: Scalar
    t9: Scalar
    t10: Scalar

    @classmethod
    def from_seq(cls, seq) -> "TenParams":
        vals = tuple(seq)
        if len(vals) != 10:
            raise ValueError(f"expected 10 parameters, got {len(vals)}")
        return cls(*vals)

    def as_tuple(self) -> tuple:
        return (self.t1, self.t2, self.t3, self.t4, self.t5,
                self.t6, self.t7, self.t8, self.t9, self.t10)

    def to_four(self) -> "FourParamsS":
        """s1 = t1+t2, s2 = t3+t4, s3 = 2(t5+t6)-t3-t4, s4 = -t1-t2-2(t7+t8)."""
        return FourParamsS(
            s1=self.t1 + self.t2,
            s2=self.t3 + self.t4,
            s3=2 * (self.t5 + self.t6) - self.t3 - self.t4,
            s4=-self.t1 - self.t2 - 2 * (self.t7 + self.t8),
        )


@dataclass(frozen=True)
class FourParamsS:
    s1: Scalar
    s2: Scalar
    s3: Scalar
    s4: Scalar

    def as_tuple(self) -> tuple:
        return (self.s1, self.s2, self.s3, self.s4)

    def to_lambda_mu(self) -> "LambdaMu":
        return LambdaMu(lam=self.s1 + self.s4, mu=self.s3 - self.s2)

    def lift_to_ten(self) -> TenParams:
        """One representative t-vector mapping onto these s-parameters."""
        z = self.s1 * 0
        return TenParams(
            t1=self.s1, t2=z,
            t3=self.s2, t4=z,
            t5=(self.s3 + self.s2) / 2, t6=z,
            t7=-(self.s4 + self.s1) / 2, t8=z,
            t9=z, t10=z,
        )


@dataclass(frozen=True)
class FourParamsP:
    p1: Scalar
    p2: Scalar
    p3: Scalar
    p4: Scalar

    def to_ten(self) -> TenParams:
        """Natural-family parameters sit inside the 10-parameter family at
        t1=-t2=p1, t3=-t4=p2, t5=-t6=p3, t7=-t8=p4, t9=t10=0."""
        z = self.p1 * 0
        return TenParams(
            t1=self.p1, t2=-self.p1,
            t3=self.p2, t4=-self.p2,
            t5=self.p3, t6=-self.p3,
            t7=self.p4, t8=-self.p4,
            t9=z, t10=z,
        )


@dataclass(frozen=True)
class LambdaMu:
    lam: Scalar
    mu: Scalar


@dataclass(frozen=True)
class DeformationQ:
    q: FrameTensor        # (0,3)
    q_mixed: FrameTensor  # (1,2) with the output index last


def _tol(backend: str, tol: Optional[float]) -> Scalar:
    if tol is not None:
        return tol
    # float default sits above finite-difference noise at h = 1e-3
    return 0 if backend == EXACT else 1e-6


# ---------------------------------------------------------------------------
# primitive monomials of the 10-parameter display


class QMonomialTable:
    """Base part and per-parameter group tensors of the 10-parameter
    deformation, precomputed once per (structure, F) pair."""

    def __init__(self, s: AcnStructure, fd: FundamentalData):
        self.structure = s
        f = fd.f
        phi = s.phi
        eta = s.eta
        omega = fd.omega
        xi = s.xi

        a_phi = apply_endo(f, phi, 1)             # F(x, phi y, z)
        g_phi = apply_endo(f, phi, 0)             # F(phi x, y, z)
        pp = apply_endo(g_phi, phi, 1)            # F(phi x, phi y, z)
        f_xi = plug_vector(f, xi, 2)              # F(x, y, xi)
        a_xi = plug_vector(a_phi, xi, 2)          # F(x, phi y, xi)
        g_xi = plug_vector(g_phi, xi, 2)          # F(phi x, y, xi)
        pp_xi = plug_vector(pp, xi, 2)            # F(phi x, phi y, xi)
        f_xi0 = plug_vector(f, xi, 0)             # F(xi, x, y)
        f_xi0_phi = apply_endo(f_xi0, phi, 0)     # F(xi, phi x, y)
        omega_phi = apply_endo(omega, phi, 0)     # omega(phi x)
        eta_eta = outer(eta, eta)

        self.base = tensor_sub(
            tensor_scale(tensor_add(a_phi, _eta_on_slot(a_xi, eta, 2)), half(s.backend)),
            _eta_on_slot(a_xi, eta, 1),           # F(x, phi z, xi) eta(y)
        )

        g1 = tensor_combine(
            permute(f, (1, 0, 2)),                # F(y, x, z)
            [
                (1, permute(pp, (1, 0, 2))),      # F(phi y, phi x, z)
                (-1, _eta_on_slot(permute(f_xi, (1, 0)), eta, 2)),
                (-1, _eta_on_slot(permute(pp_xi, (1, 0)), eta, 2)),
                (-1, _eta_on_slot(f_xi, eta, 0)),         # F(y, z, xi) eta(x)
                (-1, _eta_on_slot(f_xi0, eta, 1)),        # F(xi, x, z) eta(y)
                (1, outer(eta_eta, omega)),               # eta(x) eta(y) omega(z)
            ],
        )
        g3 = tensor_combine(
            permute(a_phi, (1, 0, 2)),            # F(y, phi x, z)
            [
                (-1, permute(g_phi, (1, 0, 2))),  # F(phi y, x, z)
                (-1, _eta_on_slot(permute(a_xi, (1, 0)), eta, 2)),
                (1, _eta_on_slot(permute(g_xi, (1, 0)), eta, 2)),
                (-1, _eta_on_slot(a_xi, eta, 0)),         # F(y, phi z, xi) eta(x)
                (-1, _eta_on_slot(f_xi0_phi, eta, 1)),    # F(xi, phi x, z) eta(y)
                (1, outer(eta_eta, omega_phi)),
            ],
        )
        inner5 = tensor_sub(tensor_add(g_xi, a_xi), outer(eta, omega_phi))
        inner7 = tensor_add(tensor_sub(pp_xi, f_xi), outer(eta, omega))
        swap_yz = (0, 2, 1)
        self.groups = {
            1: g1,
            2: permute(g1, swap_yz),
            3: g3,
            4: permute(g3, swap_yz),
            5: _eta_on_slot(inner5, eta, 0),
            6: _eta_on_slot(permute(inner5, (1, 0)), eta, 0),
            7: _eta_on_slot(inner7, eta, 0),
            8: _eta_on_slot(permute(inner7, (1, 0)), eta, 0),
            9: outer(omega, eta_eta),
            10: outer(omega_phi, eta_eta),
        }
        # shared pieces reused by other families
        self.a_phi = a_phi
        self.g_phi = g_phi
        self.pp = pp
        self.f_xi = f_xi
        self.a_xi = a_xi
        self.omega_phi = omega_phi

    def evaluate(self, t: TenParams) -> FrameTensor:
        coeffs = t.as_tuple()
        return tensor_combine(self.base, [(coeffs[i - 1], self.groups[i]) for i in range(1, 11)])


def almost_phi_residual(s: AcnStructure, fd: FundamentalData, q: FrameTensor) -> Scalar:
    """Residual of F(x,y,z) = Q(x,y,phi z) - Q(x,phi y,z)."""
    recon = tensor_sub(apply_endo(q, s.phi, 2), apply_endo(q, s.phi, 1))
    return max_abs(tensor_sub(fd.f, recon))


def q_ten_param(
    s: AcnStructure,
    fd: FundamentalData,
    t: TenParams,
    table: Optional[QMonomialTable] = None,
    tol: Optional[float] = None,
    verify: bool = True,
) -> DeformationQ:
    """Deformation of the 10-parameter phi-parallel family.

    The phi-parallelism condition is re-verified after assembly; it holds
    for every parameter vector, so a nonzero residual means inconsistent
    inputs and raises AlmostPhiError.
    """
    if table is None:
        table = QMonomialTable(s, fd)
    q = table.evaluate(t)
    if verify:
        residual = almost_phi_residual(s, fd, q)
        if residual > _tol(s.backend, tol):
            raise AlmostPhiError(f"phi-parallelism residual {residual} nonzero")
    return DeformationQ(q=q, q_mixed=raise_slot(q, s.g_inv, 2))


def q_four_param(
    s: AcnStructure,
    fd: FundamentalData,
    sp: FourParamsS,
    flags=None,
    override: bool = False,
    tol: Optional[float] = None,
) -> DeformationQ:
    """Deformation of the 4-parameter family on normal structures with
    closed eta (flags is_normal and eta_closed must be set)."""
    if not override:
        _require_normal_closed(flags)
    table = QMonomialTable(s, fd)
    eta = s.eta
    q = tensor_combine(
        table.base,
        [
            (sp.s1, tensor_add(permute(fd.f, (1, 0, 2)), permute(table.pp, (1, 0, 2)))),
            (sp.s2, tensor_sub(permute(table.a_phi, (1, 0, 2)), permute(table.g_phi, (1, 0, 2)))),
            (sp.s3, _eta_on_slot(table.a_xi, eta, 0)),   # F(y, phi z, xi) eta(x)
            (sp.s4, _eta_on_slot(table.f_xi, eta, 0)),   # F(y, z, xi) eta(x)
        ],
    )
    return DeformationQ(q=q, q_mixed=raise_slot(q, s.g_inv, 2))


def _require_normal_closed(flags):
    if flags is None:
        raise ClassViolationError(
            "this family needs the normal/eta-closed class flags; pass the "
            "classification report or override=True"
        )
    if not (flags.is_normal.value and flags.eta_closed.value):
        raise ClassViolationError(
            "structure is not normal with closed eta; the family display is "
            "only claimed on that class (override=True to evaluate anyway)"
        )


def natural_family(
    s: AcnStructure,
    fd: FundamentalData,
    nd: NijenhuisData,
    p: FourParamsP,
    conn: ConnectionCoeffs,
    backend,
    tol: Optional[float] = None,
) -> DeformationQ:
    """4-parameter family of natural connections; the parallelism of phi,
    eta and g under the deformed connection is verified directly."""
    eta = s.eta
    phi = s.phi
    xi = s.xi
    n_t = nd.n

    np_ = apply_endo(n_t, phi, 2)                 # N(a, b, phi c)
    np0 = plug_vector(np_, xi, 0)                 # N(xi, b, phi c)
    np1 = plug_vector(np_, xi, 1)                 # N(a, xi, phi c)
    n1 = plug_vector(n_t, xi, 1)                  # N(a, xi, c)
    n0 = plug_vector(n_t, xi, 0)                  # N(xi, b, c)
    n_xi = plug_vector(n_t, xi, 2)                # N(a, b, xi)
    n_xx = plug_vector(n_xi, xi, 1)               # N(a, xi, xi)
    phi2 = phi.compose(phi)

    term1 = tensor_combine(
        permute(np_, (1, 2, 0)),                  # N(y, z, phi x)
        [
            (1, _eta_on_slot(permute(np0, (1, 0)), eta, 2)),  # N(xi, y, phi x) eta(z)
            (1, _eta_on_slot(permute(np1, (1, 0)), eta, 1)),  # N(z, xi, phi x) eta(y)
        ],
    )
    term2 = tensor_combine(
        permute(n_t, (2, 1, 0)),                  # N(z, y, x)
        [
            (1, _eta_on_slot(permute(n1, (1, 0)), eta, 2)),   # N(y, xi, x) eta(z)
            (1, _eta_on_slot(permute(n0, (1, 0)), eta, 1)),   # N(xi, z, x) eta(y)
        ],
    )
    inner3 = tensor_add(
        permute(apply_endo(n_xi, phi2, 0), (1, 0)),           # N(phi^2 z, y, xi)
        outer(eta, n_xx),                                     # N(z, xi, xi) eta(y)
    )
    inner4 = tensor_add(
        apply_endo(n_xi, phi, 1),                             # N(y, phi z, xi)
        outer(eta, apply_endo(n_xx, phi, 0)),                 # N(phi z, xi, xi) eta(y)
    )
    table = QMonomialTable(s, fd)
    q = tensor_combine(
        table.base,
        [
            (p.p1, term1),
            (p.p2, term2),
            (p.p3, _eta_on_slot(inner3, eta, 0)),
            (p.p4, _eta_on_slot(inner4, eta, 0)),
        ],
    )
    dq = DeformationQ(q=q, q_mixed=raise_slot(q, s.g_inv, 2))
    conn2 = apply_deformation(conn, dq, provenance="natural-family")
    residuals = check_connection_flags(conn2, s, backend)
    tolerance = _tol(s.backend, tol)
    for name in ("phi", "eta", "g"):
        if residuals[name] > tolerance:
            raise NaturalityError(f"natural family fails nabla''{name} = 0: {residuals[name]}")
    return dq


def base_deformation(s: AcnStructure, fd: FundamentalData) -> DeformationQ:
    """The parameter-free part shared by every family; applying it to the
    Levi-Civita connection gives the canonical connection."""
    table = QMonomialTable(s, fd)
    return DeformationQ(q=table.base, q_mixed=raise_slot(table.base, s.g_inv, 2))


def apply_deformation(
    conn: ConnectionCoeffs, dq: DeformationQ, provenance: str = "deformed"
) -> ConnectionCoeffs:
    gamma2 = tensor_add(conn.gamma, dq.q_mixed)
    return ConnectionCoeffs(conn.dim, gamma2, provenance)


def canonical_connection(s: AcnStructure, conn: ConnectionCoeffs, fd: FundamentalData) -> ConnectionCoeffs:
    """nabla''_x y = nabla_x y + 1/2 {(nabla_x phi) phi y + (nabla_x eta) y xi}
    - eta(y) nabla_x xi, assembled from F by raising."""
    return apply_deformation(conn, base_deformation(s, fd), provenance="canonical")


def yano_connection(
    s: AcnStructure,
    conn: ConnectionCoeffs,
    fd: FundamentalData,
    flags=None,
    override: bool = False,
) -> ConnectionCoeffs:
    """The symmetric phi-parallel connection

    nabla'_x y = nabla_x y + 1/4 { 2 (nabla_x phi) phi y + (nabla_y phi) phi x
                 - (nabla_{phi y} phi) x + 2 (nabla_x eta) y xi
                 - 3 eta(x) nabla_y xi - 4 eta(y) nabla_x xi }

    on normal structures with closed eta.
    """
    if not override:
        _require_normal_closed(flags)
    table = QMonomialTable(s, fd)
    eta = s.eta
    quarter = half(s.backend) * half(s.backend)
    q = tensor_scale(
        tensor_combine(
            tensor_scale(table.a_phi, 2),                      # 2 F(x, phi y, z)
            [
                (1, permute(table.a_phi, (1, 0, 2))),          # F(y, phi x, z)
                (-1, permute(table.g_phi, (1, 0, 2))),         # F(phi y, x, z)
                (2, _eta_on_slot(table.a_xi, eta, 2)),         # 2 F(x, phi y, xi) eta(z)
                (-3, _eta_on_slot(table.a_xi, eta, 0)),        # 3 eta(x) F(y, phi z, xi)
                (-4, _eta_on_slot(table.a_xi, eta, 1)),        # 4 eta(y) F(x, phi z, xi)
            ],
        ),
        quarter,
    )
    dq = DeformationQ(q=q, q_mixed=raise_slot(q, s.g_inv, 2))
    return apply_deformation(conn, dq, provenance="yano")


def f45_family(
    s: AcnStructure,
    conn: ConnectionCoeffs,
    fd: FundamentalData,
    lm: LambdaMu,
    flags=None,
    override: bool = False,
) -> ConnectionCoeffs:
    """The 2-parameter family on structures where F is built from the
    metric patterns of the two pure classes:

    nabla'_x y = nabla_x y + theta(xi)/2n {g(x,phi y) xi - eta(y) phi x}
                 + theta*(xi)/2n {g(x,y) xi - eta(y) x}
                 + (lam theta(xi) + mu theta*(xi))/2n {eta(x) y - eta(x) eta(y) xi}
                 + (mu theta(xi) - lam theta*(xi))/2n eta(x) phi y.
    """
    if not override:
        if flags is None or not flags.is_f4_plus_f5.value:
            raise ClassViolationError(
                "structure is not in the combined F4+F5 class "
                "(override=True to evaluate anyway)"
            )
    dq = f45_deformation(s, fd, lm)
    return apply_deformation(conn, dq, provenance="f45-family")


def f45_deformation(s: AcnStructure, fd: FundamentalData, lm: LambdaMu) -> DeformationQ:
    eta = s.eta
    g = s.g
    two_n = 2 * s.n
    c1 = fd.theta_xi / two_n
    c2 = fd.theta_star_xi / two_n
    c3 = (lm.lam * fd.theta_xi + lm.mu * fd.theta_star_xi) / two_n
    c4 = (lm.mu * fd.theta_xi - lm.lam * fd.theta_star_xi) / two_n

    g_xphiy = apply_endo(g, s.phi, 1)     # g(x, phi y)
    g_phix = apply_endo(g, s.phi, 0)      # g(phi x, y)
    zero_t = FrameTensor.zeros(s.dim, 3, s.backend)
    q = tensor_combine(
        zero_t,
        [
            (c1, tensor_sub(_eta_on_slot(g_xphiy, eta, 2), _eta_on_slot(g_phix, eta, 1))),
            (c2, tensor_sub(_eta_on_slot(g, eta, 2), _eta_on_slot(g, eta, 1))),
            (c3, tensor_sub(_eta_on_slot(g, eta, 0), outer(outer(eta, eta), eta))),
            (c4, _eta_on_slot(g_phix, eta, 0)),
        ],
    )
    return DeformationQ(q=q, q_mixed=raise_slot(q, s.g_inv, 2))


# ---------------------------------------------------------------------------
# torsion


def torsion(conn: ConnectionCoeffs, backend, g: FrameTensor) -> FrameTensor:
    """T(x,y,z) = g(nabla'_x y - nabla'_y x - [x,y], z); antisymmetric in
    the first pair."""
    return torsion_tensor(conn, backend, g)


def eq19_torsion(s: AcnStructure, fd: FundamentalData, sp: FourParamsS) -> FrameTensor:
    """Closed-form torsion of the 4-parameter family on its class:

    T = s1 {F(y,x,z) - F(x,y,z) + F(phi y,phi x,z) - F(phi x,phi y,z)}
        + (1-4 s2)/2 {F(x,phi y,z) - F(y,phi x,z)}
        - s4 {F(x,z,xi) eta(y) - F(y,z,xi) eta(x)}
        - (1-s2+s3) {F(x,phi z,xi) eta(y) - F(y,phi z,xi) eta(x)}.
    """
    table = QMonomialTable(s, fd)
    f = fd.f
    eta = s.eta
    swap01 = (1, 0, 2)
    one_ = half(s.backend) * 2
    part1 = tensor_add(
        tensor_sub(permute(f, swap01), f),
        tensor_sub(permute(table.pp, swap01), table.pp),
    )
    part2 = tensor_sub(table.a_phi, permute(table.a_phi, swap01))
    part3 = tensor_sub(_eta_on_slot(table.f_xi, eta, 1), _eta_on_slot(table.f_xi, eta, 0))
    part4 = tensor_sub(_eta_on_slot(table.a_xi, eta, 1), _eta_on_slot(table.a_xi, eta, 0))
    zero_t = FrameTensor.zeros(s.dim, 3, s.backend)
    return tensor_combine(
        zero_t,
        [
            (sp.s1, part1),
            ((one_ - 4 * sp.s2) * half(s.backend), part2),
            (-sp.s4, part3),
            (-(one_ - sp.s2 + sp.s3), part4),
        ],
    )


# ---------------------------------------------------------------------------
# parameter conditions and measured parallelism


def parameter_conditions(t: TenParams) -> dict:
    """Predicates of the two parameter conditions:
    almost contact iff t1+t2-t9 = t3+t4-t10 = 0;
    natural iff t1+t2 = t3+t4 = t5+t6 = t7+t8 = t9 = t10 = 0."""
    ac = (t.t1 + t.t2 - t.t9 == 0) and (t.t3 + t.t4 - t.t10 == 0)
    nat = (
        t.t1 + t.t2 == 0
        and t.t3 + t.t4 == 0
        and t.t5 + t.t6 == 0
        and t.t7 + t.t8 == 0
        and t.t9 == 0
        and t.t10 == 0
    )
    return {"almost_contact": ac, "natural": nat}


def check_connection_flags(conn2: ConnectionCoeffs, s: AcnStructure, backend) -> dict:
    """Measured max-abs residuals of nabla' phi, nabla' xi, nabla' eta,
    nabla' g for an arbitrary connection."""
    d = s.dim
    phi_resid = max_abs(_f_from_connection(s, conn2))
    z = zero(s.backend)
    xi_comps = []
    for x in range(d):
        for e in range(d):
            acc = z
            for m in range(d):
                if s.xi[m] != 0:
                    gv = conn2.gamma.get(x, m, e)
                    if gv != 0:
                        acc = acc + s.xi[m] * gv
            xi_comps.append(acc)
    xi_resid = max_abs(FrameTensor(d, 2, tuple(xi_comps), s.backend))
    eta_resid = max_abs(nabla_tensor(conn2, s.eta, backend))
    g_resid = max_abs(nabla_tensor(conn2, s.g, backend))
    return {"phi": phi_resid, "xi": xi_resid, "eta": eta_resid, "g": g_resid}


# ---------------------------------------------------------------------------
# the unconditional symmetric-part identity


def eq17_rhs(
    s: AcnStructure, fd: FundamentalData, nd: NijenhuisData, t: TenParams
) -> FrameTensor:
    """Right-hand side of the symmetric-part identity: the symmetrized
    deformation expressed through the associated Nijenhuis tensor."""
    eta = s.eta
    phi = s.phi
    xi = s.xi
    nt = nd.n_tilde
    omega = fd.omega

    ntp = apply_endo(nt, phi, 2)            # N~(a, b, phi c)
    ntp0 = plug_vector(ntp, xi, 0)          # N~(xi, b, phi c)
    nt0 = plug_vector(nt, xi, 0)            # N~(xi, b, c)
    nt_xi = plug_vector(nt, xi, 2)          # N~(a, b, xi)
    nt_xx = plug_vector(nt_xi, xi, 1)       # N~(a, xi, xi)
    phi2 = phi.compose(phi)
    omega_phi = apply_endo(omega, phi, 0)

    part12 = tensor_combine(
        permute(ntp, (1, 2, 0)),            # N~(y, z, phi x)
        [
            (-1, _eta_on_slot(permute(ntp0, (1, 0)), eta, 2)),  # N~(xi, y, phi x) eta(z)
            (-1, _eta_on_slot(permute(ntp0, (1, 0)), eta, 1)),  # N~(xi, z, phi x) eta(y)
        ],
    )
    part34 = tensor_combine(
        permute(nt, (1, 2, 0)),             # N~(y, z, x)
        [
            (-1, _eta_on_slot(permute(nt0, (1, 0)), eta, 2)),   # N~(xi, y, x) eta(z)
            (-1, _eta_on_slot(permute(nt0, (1, 0)), eta, 1)),   # N~(xi, z, x) eta(y)
        ],
    )
    inner56 = tensor_add(
        permute(apply_endo(nt_xi, phi2, 0), (1, 0)),  # N~(phi^2 z, y, xi)
        outer(eta, nt_xx),                            # N~(z, xi, xi) eta(y)
    )
    inner78 = tensor_sub(
        permute(apply_endo(nt_xi, phi, 0), (1, 0)),   # N~(phi z, y, xi)
        outer(eta, apply_endo(nt_xx, phi, 0)),        # N~(phi z, xi, xi) eta(y)
    )
    eta_eta = outer(eta, eta)
    zero_t = FrameTensor.zeros(s.dim, 3, s.backend)
    return tensor_combine(
        zero_t,
        [
            (t.t1 + t.t2, part12),
            (-(t.t3 + t.t4), part34),
            (-(t.t5 + t.t6), _eta_on_slot(inner56, eta, 0)),
            (t.t7 + t.t8, _eta_on_slot(inner78, eta, 0)),
            (2 * t.t9, outer(omega, eta_eta)),
            (2 * t.t10, outer(omega_phi, eta_eta)),
        ],
    )


def eq17_residual(
    s: AcnStructure,
    fd: FundamentalData,
    nd: NijenhuisData,
    t: TenParams,
    table: Optional[QMonomialTable] = None,
) -> Scalar:
    """Residual of Q(x,y,z) + Q(x,z,y) against the N~-expression; an
    unconditional identity for every parameter vector."""
    if table is None:
        table = QMonomialTable(s, fd)
    q = table.evaluate(t)
    lhs = tensor_add(q, permute(q, (0, 2, 1)))
    return max_abs(tensor_sub(lhs, eq17_rhs(s, fd, nd, t)))
