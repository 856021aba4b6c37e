"""Fundamental tensor of the structure, associated 1-forms, Nijenhuis
tensors, d(eta), and the class predicates.

The fundamental tensor is F(x,y,z) = g((nabla_x phi) y, z) for the
Levi-Civita connection nabla.  Its contractions

    theta(z)      = g^{ij} F(e_i, e_j, z)
    theta_star(z) = g^{ij} F(e_i, phi e_j, z)
    omega(z)      = F(xi, xi, z)

drive the class predicates.  Class membership is residual-based: F is
compared componentwise against the class formula built from the computed
theta(xi), theta_star(xi).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import ConnectionCoeffs, nabla_tensor
from .scalars import EXACT, Scalar, zero
from .structure import AcnStructure
from .tensor import (
    FrameTensor,
    apply_endo,
    max_abs,
    outer,
    permute,
    plug_vector,
    tensor_add,
    tensor_combine,
    tensor_scale,
    tensor_sub,
)


class FundamentalSymmetryError(ValueError):
    """F violates its defining symmetries: the connection passed is not
    the Levi-Civita connection of the structure, or the structure is
    invalid."""


class NijenhuisMismatchError(ValueError):
    """The derivative form and the bracket form of N disagree."""


@dataclass(frozen=True)
class FundamentalData:
    f: FrameTensor               # (0,3)
    theta: FrameTensor           # (0,1)
    theta_star: FrameTensor      # (0,1)
    omega: FrameTensor           # (0,1)
    theta_xi: Scalar
    theta_star_xi: Scalar
    xi_theta_xi: Scalar          # xi(theta(xi)); identically 0 on Lie backends
    xi_theta_star_xi: Scalar
    dtheta_xi: tuple             # e_a(theta(xi)) per frame direction
    dtheta_star_xi: tuple


@dataclass(frozen=True)
class NijenhuisData:
    n: FrameTensor               # (0,3), derivative form
    n_tilde: FrameTensor         # (0,3)
    d_eta: FrameTensor           # (0,2)
    bracket_residual: Scalar     # max-abs gap between the two N computations


@dataclass(frozen=True)
class ClassFlag:
    value: bool
    residual: Scalar


@dataclass(frozen=True)
class ClassReport:
    is_f0: ClassFlag
    is_normal: ClassFlag
    eta_closed: ClassFlag
    is_f4: ClassFlag
    is_f5: ClassFlag
    is_f4_plus_f5: ClassFlag
    is_f3_plus_f7_candidate: ClassFlag
    is_f4_0: ClassFlag
    is_f5_0: ClassFlag
    theta_xi: Scalar
    theta_star_xi: Scalar

    def flags(self) -> dict:
        return {
            "is_f0": self.is_f0,
            "is_normal": self.is_normal,
            "eta_closed": self.eta_closed,
            "is_f4": self.is_f4,
            "is_f5": self.is_f5,
            "is_f4_plus_f5": self.is_f4_plus_f5,
            "is_f3_plus_f7_candidate": self.is_f3_plus_f7_candidate,
            "is_f4_0": self.is_f4_0,
            "is_f5_0": self.is_f5_0,
        }


def _tolerance(backend: str, tol: Optional[float]) -> Scalar:
    if tol is not None:
        return tol
    # float default sits above finite-difference noise at h = 1e-3
    return 0 if backend == EXACT else 1e-6


def fundamental_tensor(
    s: AcnStructure,
    conn: ConnectionCoeffs,
    backend,
    tol: Optional[float] = None,
    with_derivatives: bool = True,
) -> FundamentalData:
    """Compute F = g((nabla phi) ., .) and the associated 1-forms.

    Both defining symmetries of F are re-verified; a violation raises
    FundamentalSymmetryError.  On chart backends the xi-derivatives of
    theta(xi), theta_star(xi) are finite differences; on Lie backends they
    vanish identically.
    """
    f = _f_from_connection(s, conn)
    tolerance = _tolerance(s.backend, tol)

    # F(x,y,z) = F(x,z,y)
    r1 = max_abs(tensor_sub(f, permute(f, (0, 2, 1))))
    # F(x, phi y, phi z) = F(x,y,z) - F(x,xi,z) eta(y) - F(x,y,xi) eta(z)
    lhs = apply_endo(apply_endo(f, s.phi, 1), s.phi, 2)
    f_xi_mid = plug_vector(f, s.xi, 1)    # F(x, xi, z)
    f_xi_last = plug_vector(f, s.xi, 2)   # F(x, y, xi)
    rhs = tensor_sub(
        tensor_sub(f, _eta_on_slot(f_xi_mid, s.eta, 1)),
        _eta_on_slot(f_xi_last, s.eta, 2),
    )
    r2 = max_abs(tensor_sub(lhs, rhs))
    if r1 > tolerance or r2 > tolerance:
        raise FundamentalSymmetryError(
            f"fundamental-tensor symmetry residuals {r1}, {r2} exceed tolerance"
        )

    theta, theta_star, omega = _one_forms(s, f)
    theta_xi = plug_vector(theta, s.xi, 0).comps[0]
    theta_star_xi = plug_vector(theta_star, s.xi, 0).comps[0]

    z = zero(s.backend)
    if with_derivatives and hasattr(backend, "rebased"):
        dtheta = backend.derive_scalar(lambda p: _theta_values_at(s, backend, p)[0])
        dtheta_star = backend.derive_scalar(lambda p: _theta_values_at(s, backend, p)[1])
        xi_theta = sum(c * v for c, v in zip(s.xi, dtheta))
        xi_theta_star = sum(c * v for c, v in zip(s.xi, dtheta_star))
    else:
        dtheta = (z,) * s.dim
        dtheta_star = (z,) * s.dim
        xi_theta = z
        xi_theta_star = z

    return FundamentalData(
        f=f,
        theta=theta,
        theta_star=theta_star,
        omega=omega,
        theta_xi=theta_xi,
        theta_star_xi=theta_star_xi,
        xi_theta_xi=xi_theta,
        xi_theta_star_xi=xi_theta_star,
        dtheta_xi=tuple(dtheta),
        dtheta_star_xi=tuple(dtheta_star),
    )


def _f_from_connection(s: AcnStructure, conn: ConnectionCoeffs) -> FrameTensor:
    """(nabla_x phi) y = nabla_x (phi y) - phi (nabla_x y), lowered by g.

    The frame components of phi are constant, so no scalar-derivative
    term appears on either backend.
    """
    d = s.dim
    gamma = conn.gamma
    phi = s.phi
    g = s.g
    z = zero(s.backend)
    comps = []
    for x in range(d):
        for y in range(d):
            row = [z] * d
            for e in range(d):
                acc = z
                for m in range(d):
                    pv = phi.rows[m][y]
                    if pv != 0:
                        gv = gamma.get(x, m, e)
                        if gv != 0:
                            acc = acc + pv * gv
                    gv = gamma.get(x, y, m)
                    if gv != 0:
                        pe = phi.rows[e][m]
                        if pe != 0:
                            acc = acc - gv * pe
                row[e] = acc
            for zslot in range(d):
                acc = z
                for e in range(d):
                    if row[e] != 0:
                        gv = g.get(e, zslot)
                        if gv != 0:
                            acc = acc + row[e] * gv
                comps.append(acc)
    return FrameTensor(d, 3, tuple(comps), s.backend)


def _one_forms(s: AcnStructure, f: FrameTensor):
    d = s.dim
    z = zero(s.backend)
    g_inv = s.g_inv
    f_phi = apply_endo(f, s.phi, 1)  # F(x, phi y, z)
    theta = []
    theta_star = []
    for zslot in range(d):
        acc_t = z
        acc_ts = z
        for i in range(d):
            for j in range(d):
                w = g_inv.get(i, j)
                if w == 0:
                    continue
                v = f.get(i, j, zslot)
                if v != 0:
                    acc_t = acc_t + w * v
                v = f_phi.get(i, j, zslot)
                if v != 0:
                    acc_ts = acc_ts + w * v
        theta.append(acc_t)
        theta_star.append(acc_ts)
    omega = plug_vector(plug_vector(f, s.xi, 0), s.xi, 0)
    return (
        FrameTensor(d, 1, tuple(theta), s.backend),
        FrameTensor(d, 1, tuple(theta_star), s.backend),
        omega,
    )


def _theta_values_at(s: AcnStructure, backend, point):
    """theta(xi), theta_star(xi) of the rebased chart pipeline at a point."""
    be = backend.rebased(point)
    conn = be.levi_civita()
    fd = fundamental_tensor(be.structure, conn, be, with_derivatives=False)
    return fd.theta_xi, fd.theta_star_xi


def _eta_on_slot(t: FrameTensor, eta: FrameTensor, slot: int) -> FrameTensor:
    """Multiply an order-(k-1) tensor by eta in the named slot, producing
    order k: result(..., x at slot, ...) = t(...) eta(x)."""
    prod = outer(t, eta)  # slots of t then eta-slot last
    k = prod.order
    if slot == k - 1:
        return prod
    perm = [p for p in range(k) if p != slot] + [slot]
    return permute(prod, perm)


# ---------------------------------------------------------------------------
# Nijenhuis tensors


def nijenhuis(s: AcnStructure, fd: FundamentalData, backend, tol: Optional[float] = None) -> NijenhuisData:
    """N and its associated tensor, with the bracket-form cross-check.

    Derivative form:
        N(x,y,z) = F(phi x,y,z) - F(phi y,x,z) - F(x,y,phi z) + F(y,x,phi z)
                   + F(x,phi y,xi) eta(z) - F(y,phi x,xi) eta(z)
    Associated form flips the three minus signs on the swapped terms.
    The bracket form is evaluated independently from backend brackets;
    disagreement raises NijenhuisMismatchError.
    """
    f = fd.f
    phi = s.phi
    d = s.dim

    f_phix = apply_endo(f, phi, 0)                      # F(phi x, y, z)
    swap_xy = permute(f_phix, (1, 0, 2))                # F(phi y, x, z)
    f_phiz = apply_endo(f, phi, 2)                      # F(x, y, phi z)
    f_phiz_swapped = permute(f_phiz, (1, 0, 2))         # F(y, x, phi z)
    nabla_eta = plug_vector(apply_endo(f, phi, 1), s.xi, 2)  # (nabla_x eta) y = F(x, phi y, xi)
    ne_eta = _eta_on_slot(nabla_eta, s.eta, 2)          # F(x, phi y, xi) eta(z)
    ne_eta_swapped = permute(ne_eta, (1, 0, 2))

    n = tensor_add(
        tensor_sub(tensor_sub(f_phix, swap_xy), tensor_sub(f_phiz, f_phiz_swapped)),
        tensor_sub(ne_eta, ne_eta_swapped),
    )
    n_tilde = tensor_add(
        tensor_sub(tensor_add(f_phix, swap_xy), tensor_add(f_phiz, f_phiz_swapped)),
        tensor_add(ne_eta, ne_eta_swapped),
    )
    d_eta = tensor_sub(nabla_eta, permute(nabla_eta, (1, 0)))

    n_bracket = _nijenhuis_from_brackets(s, nabla_eta, backend)
    residual = max_abs(tensor_sub(n, n_bracket))
    tolerance = _tolerance(s.backend, tol)
    if residual > tolerance:
        raise NijenhuisMismatchError(
            f"derivative and bracket forms of N disagree (residual {residual})"
        )
    return NijenhuisData(n=n, n_tilde=n_tilde, d_eta=d_eta, bracket_residual=residual)


def _nijenhuis_from_brackets(s: AcnStructure, nabla_eta: FrameTensor, backend) -> FrameTensor:
    """N(x,y) = phi^2 [x,y] + [phi x, phi y] - phi[phi x, y] - phi[x, phi y]
                + (nabla_x eta)y xi - (nabla_y eta)x xi, lowered by g."""
    d = s.dim
    phi = s.phi
    C = backend.bracket_tensor()
    z = zero(s.backend)

    phi2_rows = phi.compose(phi).rows
    comps = []
    for x in range(d):
        for y in range(d):
            vec = [z] * d
            # phi^2 [x, y]
            for m in range(d):
                c = C.get(x, y, m)
                if c != 0:
                    for e in range(d):
                        pv = phi2_rows[e][m]
                        if pv != 0:
                            vec[e] = vec[e] + c * pv
            # [phi x, phi y]
            for a in range(d):
                pa = phi.rows[a][x]
                if pa == 0:
                    continue
                for b in range(d):
                    pb = phi.rows[b][y]
                    if pb == 0:
                        continue
                    for e in range(d):
                        c = C.get(a, b, e)
                        if c != 0:
                            vec[e] = vec[e] + pa * pb * c
            # - phi [phi x, y] - phi [x, phi y]
            for a in range(d):
                pa = phi.rows[a][x]
                if pa != 0:
                    for m in range(d):
                        c = C.get(a, y, m)
                        if c != 0:
                            for e in range(d):
                                pv = phi.rows[e][m]
                                if pv != 0:
                                    vec[e] = vec[e] - pa * c * pv
                pb = phi.rows[a][y]
                if pb != 0:
                    for m in range(d):
                        c = C.get(x, a, m)
                        if c != 0:
                            for e in range(d):
                                pv = phi.rows[e][m]
                                if pv != 0:
                                    vec[e] = vec[e] - pb * c * pv
            # + (nabla_x eta)y xi - (nabla_y eta)x xi
            ne = nabla_eta.get(x, y) - nabla_eta.get(y, x)
            if ne != 0:
                for e in range(d):
                    if s.xi[e] != 0:
                        vec[e] = vec[e] + ne * s.xi[e]
            # lower with g
            for zslot in range(d):
                acc = z
                for e in range(d):
                    if vec[e] != 0:
                        gv = s.g.get(e, zslot)
                        if gv != 0:
                            acc = acc + vec[e] * gv
                comps.append(acc)
    return FrameTensor(d, 3, tuple(comps), s.backend)


# ---------------------------------------------------------------------------
# class predicates


def f4_formula(s: AcnStructure, theta_xi: Scalar) -> FrameTensor:
    """-theta(xi)/(2n) { g(phi x, phi y) eta(z) + g(phi x, phi z) eta(y) }."""
    g_pp = apply_endo(apply_endo(s.g, s.phi, 0), s.phi, 1)
    t1 = _eta_on_slot(g_pp, s.eta, 2)             # g(phi x, phi y) eta(z)
    t2 = permute(t1, (0, 2, 1))                   # g(phi x, phi z) eta(y)
    coeff = -theta_xi / (2 * s.n)
    return tensor_scale(tensor_add(t1, t2), coeff)


def f5_formula(s: AcnStructure, theta_star_xi: Scalar) -> FrameTensor:
    """-theta_star(xi)/(2n) { g(phi x, y) eta(z) + g(phi x, z) eta(y) }."""
    g_p = apply_endo(s.g, s.phi, 0)
    t1 = _eta_on_slot(g_p, s.eta, 2)
    t2 = permute(t1, (0, 2, 1))
    coeff = -theta_star_xi / (2 * s.n)
    return tensor_scale(tensor_add(t1, t2), coeff)


def classify(
    s: AcnStructure,
    fd: FundamentalData,
    nd: NijenhuisData,
    tol: Optional[float] = None,
) -> ClassReport:
    """Residual-based class predicates.

    The F4/F5/F4+F5 flags compare F against the class formulas with the
    computed theta(xi), theta_star(xi); the closedness flags additionally
    test x(theta(xi)) = xi(theta(xi)) eta(x) per frame direction, which
    is automatic on Lie backends and finite-difference on charts.
    """
    tolerance = _tolerance(s.backend, tol)

    def flag(residual) -> ClassFlag:
        return ClassFlag(residual <= tolerance, residual)

    f = fd.f
    r_f0 = max_abs(f)
    r_normal = max_abs(nd.n)
    r_deta = max_abs(nd.d_eta)
    r_ntilde = max_abs(nd.n_tilde)

    f4_rhs = f4_formula(s, fd.theta_xi)
    f5_rhs = f5_formula(s, fd.theta_star_xi)
    r_f4 = max_abs(tensor_sub(f, f4_rhs))
    r_f5 = max_abs(tensor_sub(f, f5_rhs))
    r_f45 = max_abs(tensor_sub(f, tensor_add(f4_rhs, f5_rhs)))

    r_closed_theta = _closedness_residual(s, fd.dtheta_xi, fd.xi_theta_xi)
    r_closed_theta_star = _closedness_residual(s, fd.dtheta_star_xi, fd.xi_theta_star_xi)

    f4_flag = flag(r_f4)
    f5_flag = flag(r_f5)
    f4_0 = ClassFlag(f4_flag.value and r_closed_theta <= tolerance, max(r_f4, r_closed_theta))
    f5_0 = ClassFlag(
        f5_flag.value and r_closed_theta_star <= tolerance, max(r_f5, r_closed_theta_star)
    )

    return ClassReport(
        is_f0=flag(r_f0),
        is_normal=flag(r_normal),
        eta_closed=flag(r_deta),
        is_f4=f4_flag,
        is_f5=f5_flag,
        is_f4_plus_f5=flag(r_f45),
        is_f3_plus_f7_candidate=flag(r_ntilde),
        is_f4_0=f4_0,
        is_f5_0=f5_0,
        theta_xi=fd.theta_xi,
        theta_star_xi=fd.theta_star_xi,
    )


def _closedness_residual(s: AcnStructure, dvalues: tuple, xi_value: Scalar) -> Scalar:
    """max over frame directions of | e_a(f) - xi(f) eta(e_a) |."""
    worst = zero(s.backend)
    for a in range(s.dim):
        r = dvalues[a] - xi_value * s.eta.comps[a]
        r = -r if r < 0 else r
        if r > worst:
            worst = r
    return worst


def normality_consequences(s: AcnStructure, fd: FundamentalData) -> dict:
    """Residuals of the identities implied by N = 0:
    F(x,y,xi) = F(y,x,xi) and omega = 0."""
    f_xi = plug_vector(fd.f, s.xi, 2)
    sym = max_abs(tensor_sub(f_xi, permute(f_xi, (1, 0))))
    return {"f_xi_symmetric": sym, "omega_zero": max_abs(fd.omega)}


def ntilde_consequences(s: AcnStructure, fd: FundamentalData) -> dict:
    """Residuals of the identities implied by N~ = 0:
    F(phi x, phi y, xi) = F(y,x,xi) and omega = 0."""
    f_xi = plug_vector(fd.f, s.xi, 2)
    f_pp = apply_endo(apply_endo(f_xi, s.phi, 0), s.phi, 1)
    resid = max_abs(tensor_sub(f_pp, permute(f_xi, (1, 0))))
    return {"f_phiphi_xi": resid, "omega_zero": max_abs(fd.omega)}
