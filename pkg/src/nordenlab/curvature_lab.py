"""Curvature tensors of deformed connections, the standard curvature-like
basis built from (g, phi, eta), and the closed-form curvature relation of
the 2-parameter family on the combined pure classes with closed 1-forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .connections import DeformationQ
from .fundamental import FundamentalData, _eta_on_slot
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


class CurvaturePathError(ValueError):
    """The deformation route and the direct route to the curvature of a
    deformed connection disagree."""


@dataclass(frozen=True)
class PiBasis:
    pi1: FrameTensor
    pi2: FrameTensor
    pi3: FrameTensor
    pi4: FrameTensor
    pi5: FrameTensor

    def as_dict(self) -> dict:
        return {"pi1": self.pi1, "pi2": self.pi2, "pi3": self.pi3,
                "pi4": self.pi4, "pi5": self.pi5}


@dataclass(frozen=True)
class CurvatureLike:
    tensor: FrameTensor
    antisym_xy: Scalar
    antisym_zu: Scalar
    bianchi: Scalar

    def is_curvature_like(self, tol=0) -> bool:
        return self.antisym_xy <= tol and self.antisym_zu <= tol and self.bianchi <= tol


def pi_basis(s: AcnStructure, check: bool = True, tol: Optional[float] = None) -> PiBasis:
    """The five curvature-like tensors

        pi1 = g(y,z)g(x,u) - g(x,z)g(y,u)
        pi2 = g(y,phi z)g(x,phi u) - g(x,phi z)g(y,phi u)
        pi3 = -g(y,z)g(x,phi u) + g(x,z)g(y,phi u)
              - g(x,u)g(y,phi z) + g(y,u)g(x,phi z)
        pi4 = g(y,z)eta(x)eta(u) - g(x,z)eta(y)eta(u)
              + g(x,u)eta(y)eta(z) - g(y,u)eta(x)eta(z)
        pi5 = g(y,phi z)eta(x)eta(u) - g(x,phi z)eta(y)eta(u)
              + g(x,phi u)eta(y)eta(z) - g(y,phi u)eta(x)eta(z).
    """
    g = s.g
    gp = apply_endo(g, s.phi, 1)  # g(a, phi b), symmetric since phi is g-symmetric
    eta = s.eta
    eta2 = outer(eta, eta)
    swap_xy = (1, 0, 2, 3)

    def pair_yz_xu(a2: FrameTensor, b2: FrameTensor) -> FrameTensor:
        """T[x][y][z][u] = a2(y,z) b2(x,u)."""
        return permute(outer(a2, b2), (1, 2, 0, 3))

    def pair_yz_etas(a2: FrameTensor) -> FrameTensor:
        """T[x][y][z][u] = a2(y,z) eta(x) eta(u)."""
        return permute(outer(a2, eta2), (1, 2, 0, 3))

    def pair_xu_etas(a2: FrameTensor) -> FrameTensor:
        """T[x][y][z][u] = a2(x,u) eta(y) eta(z)."""
        return permute(outer(a2, eta2), (0, 3, 1, 2))

    p1_half = pair_yz_xu(g, g)
    pi1 = tensor_sub(p1_half, permute(p1_half, swap_xy))

    p2_half = pair_yz_xu(gp, gp)
    pi2 = tensor_sub(p2_half, permute(p2_half, swap_xy))

    p3_a = pair_yz_xu(g, gp)          # g(y,z) g(x,phi u)
    p3_b = pair_yz_xu(gp, g)          # g(y,phi z) g(x,u)
    pi3 = tensor_combine(
        tensor_scale(p3_a, -1),
        [
            (1, permute(p3_a, swap_xy)),   # + g(x,z) g(y,phi u)
            (-1, p3_b),                    # - g(x,u) g(y,phi z)
            (1, permute(p3_b, swap_xy)),   # + g(y,u) g(x,phi z)
        ],
    )

    p4_a = pair_yz_etas(g)            # g(y,z) e(x) e(u)
    p4_c = pair_xu_etas(g)            # g(x,u) e(y) e(z)
    pi4 = tensor_combine(
        p4_a,
        [
            (-1, permute(p4_a, swap_xy)),  # - g(x,z) e(y) e(u)
            (1, p4_c),
            (-1, permute(p4_c, swap_xy)),  # - g(y,u) e(x) e(z)
        ],
    )

    p5_a = pair_yz_etas(gp)           # g(y,phi z) e(x) e(u)
    p5_c = pair_xu_etas(gp)           # g(x,phi u) e(y) e(z)
    pi5 = tensor_combine(
        p5_a,
        [
            (-1, permute(p5_a, swap_xy)),
            (1, p5_c),
            (-1, permute(p5_c, swap_xy)),
        ],
    )

    basis = PiBasis(pi1=pi1, pi2=pi2, pi3=pi3, pi4=pi4, pi5=pi5)
    if check:
        tolerance = (0 if s.backend == EXACT else 1e-9) if tol is None else tol
        for name, t in basis.as_dict().items():
            c = check_curvature_like(t)
            if not c.is_curvature_like(tolerance):
                raise ValueError(f"{name} failed the curvature-like check")
    return basis


def check_curvature_like(L: FrameTensor) -> CurvatureLike:
    """Residuals of both antisymmetries and the cyclic first-pair sum."""
    a_xy = max_abs(tensor_add(L, permute(L, (1, 0, 2, 3))))
    a_zu = max_abs(tensor_add(L, permute(L, (0, 1, 3, 2))))
    cyc = tensor_add(tensor_add(L, permute(L, (1, 2, 0, 3))), permute(L, (2, 0, 1, 3)))
    return CurvatureLike(tensor=L, antisym_xy=a_xy, antisym_zu=a_zu, bianchi=max_abs(cyc))


def phi_kaehler_residual(L: FrameTensor, s: AcnStructure) -> Scalar:
    """Residual of L(x,y,phi z,phi u) = -L(x,y,z,u)."""
    lp = apply_endo(apply_endo(L, s.phi, 2), s.phi, 3)
    return max_abs(tensor_add(lp, L))


def xi_slot_residual(L: FrameTensor, s: AcnStructure) -> Scalar:
    """max |L(x,y,xi,u)|; forced to vanish for phi-Kaehler-type tensors."""
    return max_abs(plug_vector(L, s.xi, 2))


def curvature_via_deformation(
    r: FrameTensor,
    dq: DeformationQ,
    conn: ConnectionCoeffs,
    backend,
    g: FrameTensor,
    q_field: Optional[Callable] = None,
    direct: Optional[FrameTensor] = None,
    tol: Optional[float] = None,
) -> FrameTensor:
    """Curvature of the deformed connection through the deformation route:

        R'(x,y,z,u) = R(x,y,z,u) + (nabla_x Q)(y,z,u) - (nabla_y Q)(x,z,u)
                      + Q(x, Q(y,z), u) - Q(y, Q(x,z), u)

    with nabla the base connection.  When ``direct`` is supplied the
    result is compared against it and a disagreement raises
    CurvaturePathError.
    """
    d = g.dim
    nq = nabla_tensor(conn, dq.q, backend, field_fn=q_field)  # slots (a, x, y, z)
    term_nabla = tensor_sub(permute(nq, (0, 1, 2, 3)), permute(nq, (1, 0, 2, 3)))
    # term_nabla[x][y][z][u] = (nabla_x Q)(y,z,u) - (nabla_y Q)(x,z,u)
    z = zero(g.backend)
    qq = []
    qm = dq.q_mixed
    q3 = dq.q
    for x in range(d):
        for y in range(d):
            for zz in range(d):
                for u in range(d):
                    acc = z
                    for m in range(d):
                        v = qm.get(y, zz, m)
                        if v != 0:
                            w = q3.get(x, m, u)
                            if w != 0:
                                acc = acc + v * w
                        v = qm.get(x, zz, m)
                        if v != 0:
                            w = q3.get(y, m, u)
                            if w != 0:
                                acc = acc - v * w
                    qq.append(acc)
    qq_t = FrameTensor(d, 4, tuple(qq), g.backend)
    r_prime = tensor_add(tensor_add(r, term_nabla), qq_t)
    if direct is not None:
        tolerance = (0 if g.backend == EXACT else 1e-6) if tol is None else tol
        gap = max_abs(tensor_sub(r_prime, direct))
        if gap > tolerance:
            raise CurvaturePathError(
                f"deformation-route curvature deviates from the direct route by {gap}"
            )
    return r_prime


def r_prime_formula_rhs(
    s: AcnStructure, fd: FundamentalData, r: FrameTensor, pis: PiBasis
) -> FrameTensor:
    """Closed-form curvature of the 2-parameter family:

        R' = R + xi(theta(xi))/2n pi5 + xi(theta*(xi))/2n pi4
               + theta(xi)^2/4n^2 (pi2 - pi4) + theta*(xi)^2/4n^2 pi1
               - theta(xi) theta*(xi)/4n^2 (pi3 - pi5).
    """
    two_n = 2 * s.n
    four_n2 = 4 * s.n * s.n
    c5 = fd.xi_theta_xi / two_n
    c4 = fd.xi_theta_star_xi / two_n
    c24 = fd.theta_xi * fd.theta_xi / four_n2
    c1 = fd.theta_star_xi * fd.theta_star_xi / four_n2
    c35 = fd.theta_xi * fd.theta_star_xi / four_n2
    return tensor_combine(
        r,
        [
            (c5, pis.pi5),
            (c4, pis.pi4),
            (c24, tensor_sub(pis.pi2, pis.pi4)),
            (c1, pis.pi1),
            (-c35, tensor_sub(pis.pi3, pis.pi5)),
        ],
    )


@dataclass(frozen=True)
class RPrimeReport:
    formula_residual: Scalar
    phi_kaehler_residual: Scalar
    xi_slot_residual: Scalar
    curvature_like: CurvatureLike


def verify_r_prime_formula(
    s: AcnStructure,
    fd: FundamentalData,
    r: FrameTensor,
    r_prime: FrameTensor,
    pis: PiBasis,
) -> RPrimeReport:
    """Residual report of R' against the closed-form right-hand side,
    together with the phi-Kaehler-type measurements of R'."""
    rhs = r_prime_formula_rhs(s, fd, r, pis)
    return RPrimeReport(
        formula_residual=max_abs(tensor_sub(r_prime, rhs)),
        phi_kaehler_residual=phi_kaehler_residual(r_prime, s),
        xi_slot_residual=xi_slot_residual(r_prime, s),
        curvature_like=check_curvature_like(r_prime),
    )
