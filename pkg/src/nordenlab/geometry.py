"""Differential-geometry substrate: brackets, Levi-Civita connections,
covariant derivatives and curvature, from two interchangeable backends.

* ``LieBackend`` works over exact structure constants of a Lie algebra
  with a left-invariant structure; all scalar fields are invariant, so
  directional derivatives vanish identically and every computation stays
  in the exact field.

* ``ChartBackend`` evaluates a warped-product coordinate chart at a base
  point.  Christoffel symbols come from central finite differences of the
  coordinate metric (O(h^2), optional one-step Richardson extrapolation);
  frame brackets use the closed-form frame fields; directional
  derivatives of downstream tensor fields are central differences.

Both expose the same three capabilities (bracket tensor, Levi-Civita
coefficients, directional derivative of a field) so every formula
downstream is written once.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from .scalars import EXACT, FLOAT, Scalar, half, one, zero
from .structure import AcnStructure, canonical_structure
from .tensor import (
    DegenerateMetricError,
    FrameTensor,
    ShapeError,
    _invert_rows,
    max_abs,
    raise_slot,
    tensor_sub,
)


class AntisymmetryError(ValueError):
    """Structure constants are not antisymmetric in the lower pair."""


class JacobiError(ValueError):
    """Structure constants violate the Jacobi identity."""


class GeometryError(ValueError):
    """Internal consistency failure (non-metric or torsional Levi-Civita)."""


@dataclass(frozen=True)
class LieFrameData:
    """Structure constants C with [e_i, e_j] = sum_k C[i][j][k] e_k."""

    dim: int
    brackets: FrameTensor  # order 3, slots (i, j, k-output)

    @classmethod
    def from_triples(cls, dim: int, triples: Sequence, backend: str = EXACT) -> "LieFrameData":
        """Build from (i, j, k, value) entries.

        Repeated (i, j, k) keys accumulate.  When both orientations of a
        pair are given explicitly they must already be antisymmetric
        (an inconsistent pair raises AntisymmetryError); a pair given in
        one orientation only is mirrored automatically.
        """
        given: dict = {}
        for i, j, k, v in triples:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ShapeError(f"bracket index out of range: ({i},{j},{k})")
            given[(i, j, k)] = given.get((i, j, k), zero(backend)) + v
        comps = [zero(backend)] * dim**3
        for (i, j, k), v in given.items():
            if i == j:
                if v != 0:
                    raise AntisymmetryError(f"[e_{i}, e_{i}] must vanish, got {v}")
                continue
            mirror = given.get((j, i, k))
            if mirror is not None and mirror != -v:
                raise AntisymmetryError(
                    f"brackets C[{i}][{j}][{k}]={v} and C[{j}][{i}][{k}]={mirror} "
                    "are not antisymmetric"
                )
            comps[(i * dim + j) * dim + k] = v
            if mirror is None:
                comps[(j * dim + i) * dim + k] = -v
            else:
                comps[(j * dim + i) * dim + k] = mirror
        return cls(dim, FrameTensor(dim, 3, tuple(comps), backend))

    @classmethod
    def abelian(cls, dim: int, backend: str = EXACT) -> "LieFrameData":
        return cls(dim, FrameTensor.zeros(dim, 3, backend))

    def validate(self, tol: Scalar = 0):
        d = self.dim
        C = self.brackets
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if abs(C.get(i, j, k) + C.get(j, i, k)) > tol:
                        raise AntisymmetryError(
                            f"C[{i}][{j}][{k}] != -C[{j}][{i}][{k}]"
                        )
        for i in range(d):
            for j in range(d):
                for l in range(d):
                    for k in range(d):
                        acc = zero(C.backend)
                        for m in range(d):
                            acc = (
                                acc
                                + C.get(i, j, m) * C.get(m, l, k)
                                + C.get(j, l, m) * C.get(m, i, k)
                                + C.get(l, i, m) * C.get(m, j, k)
                            )
                        if abs(acc) > tol:
                            raise JacobiError(
                                f"Jacobi identity fails at (i,j,l,k)=({i},{j},{l},{k})"
                            )


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Frame coefficients with nabla_{e_i} e_j = sum_k gamma[i][j][k] e_k.

    ``field``, when present, evaluates the same coefficients at an
    arbitrary chart point; it is carried for finite-difference work and
    ignored by equality.
    """

    dim: int
    gamma: FrameTensor
    provenance: str
    field: Optional[Callable] = field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Lie backend


class LieBackend:
    """Exact left-invariant geometry from structure constants."""

    def __init__(self, structure: AcnStructure, lie: LieFrameData, validated: bool = False):
        if structure.dim != lie.dim:
            raise ShapeError("structure and Lie data dimensions differ")
        if not validated:
            lie.validate(tol=0 if structure.backend == EXACT else 1e-12)
        self.structure = structure
        self.lie = lie
        self.dim = lie.dim
        self.scalar_backend = structure.backend
        self._lc: Optional[ConnectionCoeffs] = None

    def bracket_tensor(self) -> FrameTensor:
        return self.lie.brackets

    def levi_civita(self) -> ConnectionCoeffs:
        if self._lc is None:
            self._lc = levi_civita_lie(self.lie, self.structure.g, self.structure.g_inv)
        return self._lc

    # invariant frame components: every scalar field is constant
    def derive_scalar(self, field_fn) -> tuple:
        return (zero(self.scalar_backend),) * self.dim

    def derive_tensor(self, field_fn, order: int) -> FrameTensor:
        return FrameTensor.zeros(self.dim, order + 1, self.scalar_backend)


def levi_civita_lie(
    lie: LieFrameData, g: FrameTensor, g_inv: Optional[FrameTensor] = None
) -> ConnectionCoeffs:
    """Koszul formula for a left-invariant metric:

        2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y).

    The result is re-verified to be torsion-free and metric; violations
    raise GeometryError (they indicate inconsistent inputs).
    """
    d = lie.dim
    C = lie.brackets
    backend = g.backend
    if g_inv is None:
        from .tensor import invert_metric

        g_inv = invert_metric(g)
    h = half(backend)
    z = zero(backend)

    lowered = []  # lowered[i][j][k] = g(nabla_{e_i} e_j, e_k)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                acc = z
                for m in range(d):
                    cij = C.get(i, j, m)
                    if cij != 0:
                        acc = acc + cij * g.get(m, k)
                    cjk = C.get(j, k, m)
                    if cjk != 0:
                        acc = acc - cjk * g.get(m, i)
                    cki = C.get(k, i, m)
                    if cki != 0:
                        acc = acc + cki * g.get(m, j)
                lowered.append(h * acc)
    low = FrameTensor(d, 3, tuple(lowered), backend)
    gamma = raise_slot(low, g_inv, 2)
    conn = ConnectionCoeffs(d, gamma, "levi-civita")

    # torsion-free: gamma[i][j] - gamma[j][i] = C[i][j]
    tol = 0 if backend == EXACT else 1e-9
    for i in range(d):
        for j in range(d):
            for k in range(d):
                t = gamma.get(i, j, k) - gamma.get(j, i, k) - C.get(i, j, k)
                if abs(t) > tol:
                    raise GeometryError("Koszul output is not torsion-free")
    backend_obj = _BareLieBackend(d, C, backend)
    nab_g = nabla_tensor(conn, g, backend_obj)
    if max_abs(nab_g) > tol:
        raise GeometryError("Koszul output is not metric")
    return conn


class _BareLieBackend:
    """Minimal backend view used internally before a structure exists."""

    def __init__(self, dim: int, brackets: FrameTensor, scalar_backend: str):
        self.dim = dim
        self._brackets = brackets
        self.scalar_backend = scalar_backend

    def bracket_tensor(self) -> FrameTensor:
        return self._brackets

    def derive_scalar(self, field_fn) -> tuple:
        return (zero(self.scalar_backend),) * self.dim

    def derive_tensor(self, field_fn, order: int) -> FrameTensor:
        return FrameTensor.zeros(self.dim, order + 1, self.scalar_backend)


# ---------------------------------------------------------------------------
# chart backend


@dataclass(frozen=True)
class WarpFunction:
    """Closed-form frame scaling a(t) from a fixed catalog.

    kind 'exp': a(t) = exp(c*t); kind 'poly': a(t) = sum coeffs[k] t^k.
    Only the value and first derivative are needed in closed form.
    """

    kind: str
    coeffs: tuple

    def value(self, t: float) -> float:
        import math

        if self.kind == "exp":
            return math.exp(self.coeffs[0] * t)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self, t: float) -> float:
        import math

        if self.kind == "exp":
            c = self.coeffs[0]
            return c * math.exp(c * t)
        acc = 0.0
        for k in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * t + k * self.coeffs[k]
        return acc


@dataclass(frozen=True)
class ChartData:
    """A warped-product chart on coordinates (x^1..x^2n, t).

    The coordinate metric is diag(a(t)^-2 (n times), -a(t)^-2 (n times), 1)
    and the adapted frame is e_i = a(t) d/dx^i, xi = d/dt, in which the
    structure tensors take their canonical constant components.
    """

    n: int
    warp: WarpFunction
    point: tuple
    fd_step: float
    richardson: bool = False

    def __post_init__(self):
        if not (1e-6 <= self.fd_step <= 1e-2):
            raise ShapeError(f"finite-difference step {self.fd_step} outside [1e-6, 1e-2]")
        if len(self.point) != 2 * self.n + 1:
            raise ShapeError("evaluation point has wrong length")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1


class ChartBackend:
    """Finite-difference geometry of a warped chart anchored at a point."""

    def __init__(self, chart: ChartData, structure: Optional[AcnStructure] = None):
        self.chart = chart
        self.dim = chart.dim
        self.scalar_backend = FLOAT
        self.structure = structure if structure is not None else canonical_structure(
            chart.n, FLOAT
        )
        self.point = tuple(float(x) for x in chart.point)
        self.h = float(chart.fd_step)
        self._lc: Optional[ConnectionCoeffs] = None
        g0 = self.coord_metric(self.point)
        try:
            _invert_rows(g0, FLOAT)
        except DegenerateMetricError:
            raise DegenerateMetricError("coordinate metric singular at the base point")

    def rebased(self, point: Sequence[float]) -> "ChartBackend":
        return ChartBackend(replace(self.chart, point=tuple(point)), self.structure)

    # chart ingredients ----------------------------------------------------
    def coord_metric(self, p: Sequence[float]):
        n, d = self.chart.n, self.dim
        a = self.chart.warp.value(p[-1])
        w = a ** -2
        rows = [[0.0] * d for _ in range(d)]
        for i in range(n):
            rows[i][i] = w
            rows[n + i][n + i] = -w
        rows[d - 1][d - 1] = 1.0
        return rows

    def frame_matrix(self, p: Sequence[float]):
        """M[mu][a]: coordinate components of frame vector e_a."""
        d = self.dim
        a = self.chart.warp.value(p[-1])
        M = [[0.0] * d for _ in range(d)]
        for i in range(d - 1):
            M[i][i] = a
        M[d - 1][d - 1] = 1.0
        return M

    def frame_jacobian(self, p: Sequence[float]):
        """J[mu][a][nu] = d/dx^mu of (e_a)^nu, in closed form."""
        d = self.dim
        da = self.chart.warp.derivative(p[-1])
        J = [[[0.0] * d for _ in range(d)] for _ in range(d)]
        for i in range(d - 1):
            J[d - 1][i][i] = da
        return J

    # finite differences ---------------------------------------------------
    def _central(self, fn: Callable[[Sequence[float]], float], mu: int, h: float) -> float:
        p_plus = list(self.point)
        p_minus = list(self.point)
        p_plus[mu] += h
        p_minus[mu] -= h
        return (fn(p_plus) - fn(p_minus)) / (2.0 * h)

    def partial(self, fn: Callable[[Sequence[float]], float], mu: int) -> float:
        d1 = self._central(fn, mu, self.h)
        if not self.chart.richardson:
            return d1
        d2 = self._central(fn, mu, self.h / 2.0)
        return (4.0 * d2 - d1) / 3.0

    def derive_scalar(self, field_fn: Callable[[Sequence[float]], float]) -> tuple:
        """Directional derivatives e_a(f) at the base point, one per frame
        direction."""
        M = self.frame_matrix(self.point)
        partials = [self.partial(field_fn, mu) for mu in range(self.dim)]
        out = []
        for a in range(self.dim):
            acc = 0.0
            for mu in range(self.dim):
                if M[mu][a] != 0.0:
                    acc += M[mu][a] * partials[mu]
            out.append(acc)
        return tuple(out)

    def derive_tensor(self, field_fn: Callable[[Sequence[float]], FrameTensor], order: int) -> FrameTensor:
        """(order+1)-tensor D with D[a][rest] = e_a(field[rest])."""
        if field_fn is None:
            return FrameTensor.zeros(self.dim, order + 1, FLOAT)
        d = self.dim
        M = self.frame_matrix(self.point)
        partial_tensors = []
        for mu in range(d):
            # finite-difference the whole component array at once
            p_plus = list(self.point)
            p_minus = list(self.point)
            p_plus[mu] += self.h
            p_minus[mu] -= self.h
            t_plus = field_fn(p_plus)
            t_minus = field_fn(p_minus)
            diff = [(x - y) / (2.0 * self.h) for x, y in zip(t_plus.comps, t_minus.comps)]
            if self.chart.richardson:
                p_plus2 = list(self.point)
                p_minus2 = list(self.point)
                p_plus2[mu] += self.h / 2.0
                p_minus2[mu] -= self.h / 2.0
                t_plus2 = field_fn(p_plus2)
                t_minus2 = field_fn(p_minus2)
                diff2 = [(x - y) / self.h for x, y in zip(t_plus2.comps, t_minus2.comps)]
                diff = [(4.0 * b - a) / 3.0 for a, b in zip(diff, diff2)]
            partial_tensors.append(diff)
        size = d**order
        comps = []
        for a in range(d):
            col = [M[mu][a] for mu in range(d)]
            for flat in range(size):
                acc = 0.0
                for mu in range(d):
                    if col[mu] != 0.0:
                        acc += col[mu] * partial_tensors[mu][flat]
                comps.append(acc)
        return FrameTensor(d, order + 1, tuple(comps), FLOAT)

    # geometry -------------------------------------------------------------
    def coord_christoffels(self, p: Sequence[float]):
        """Gamma^lam_{mu nu} at p from central differences of the metric."""
        d = self.dim
        h = self.h
        base = self.rebased(p) if tuple(p) != self.point else self

        def g_comp(q, r, c):
            return base.coord_metric(q)[r][c]

        dg = [[[0.0] * d for _ in range(d)] for _ in range(d)]  # dg[mu][r][c]
        for mu in range(d):
            for r in range(d):
                for c in range(r, d):
                    v = base.partial(lambda q, _r=r, _c=c: base.coord_metric(q)[_r][_c], mu)
                    dg[mu][r][c] = v
                    dg[mu][c][r] = v
        g_inv = _invert_rows(base.coord_metric(p), FLOAT)
        gam = [[[0.0] * d for _ in range(d)] for _ in range(d)]  # gam[mu][nu][lam]
        for mu in range(d):
            for nu in range(d):
                for lam in range(d):
                    acc = 0.0
                    for rho in range(d):
                        acc += g_inv[lam][rho] * (
                            dg[mu][rho][nu] + dg[nu][rho][mu] - dg[rho][mu][nu]
                        )
                    gam[mu][nu][lam] = 0.5 * acc
        return gam

    def bracket_tensor(self, p: Optional[Sequence[float]] = None) -> FrameTensor:
        """Frame brackets [e_a, e_b] in frame components, from the
        closed-form frame fields."""
        p = self.point if p is None else tuple(p)
        d = self.dim
        M = self.frame_matrix(p)
        J = self.frame_jacobian(p)
        M_inv = _invert_rows(M, FLOAT)
        comps = []
        for a in range(d):
            for b in range(d):
                vec = [0.0] * d
                for nu in range(d):
                    acc = 0.0
                    for mu in range(d):
                        if M[mu][a] != 0.0:
                            acc += M[mu][a] * J[mu][b][nu]
                        if M[mu][b] != 0.0:
                            acc -= M[mu][b] * J[mu][a][nu]
                    vec[nu] = acc
                for c in range(d):
                    comps.append(sum(M_inv[c][nu] * vec[nu] for nu in range(d)))
        return FrameTensor(d, 3, tuple(comps), FLOAT)

    def levi_civita(self) -> ConnectionCoeffs:
        if self._lc is None:
            gamma = self._frame_gamma(self.point)
            self._lc = ConnectionCoeffs(
                self.dim,
                gamma,
                "levi-civita",
                field=lambda p: self._frame_gamma(tuple(p)),
            )
        return self._lc

    def _frame_gamma(self, p) -> FrameTensor:
        """Levi-Civita coefficients in the adapted frame at p:
        nabla_{e_a} e_b = e_a^mu (d_mu e_b^nu + Gamma^nu_{mu sig} e_b^sig) d_nu."""
        d = self.dim
        base = self if tuple(p) == self.point else self.rebased(p)
        gam = base.coord_christoffels(p)
        M = base.frame_matrix(p)
        J = base.frame_jacobian(p)
        M_inv = _invert_rows(M, FLOAT)
        comps = []
        for a in range(d):
            for b in range(d):
                vec = [0.0] * d
                for nu in range(d):
                    acc = 0.0
                    for mu in range(d):
                        if M[mu][a] == 0.0:
                            continue
                        acc += M[mu][a] * J[mu][b][nu]
                        for sig in range(d):
                            if M[sig][b] != 0.0:
                                acc += M[mu][a] * gam[mu][sig][nu] * M[sig][b]
                    vec[nu] = acc
                for c in range(d):
                    comps.append(sum(M_inv[c][nu] * vec[nu] for nu in range(d)))
        return FrameTensor(d, 3, tuple(comps), FLOAT)


# ---------------------------------------------------------------------------
# backend-generic operations


def nabla_tensor(
    conn: ConnectionCoeffs,
    t: FrameTensor,
    backend,
    field_fn: Optional[Callable] = None,
) -> FrameTensor:
    """Covariant derivative of a (0,k) tensor; derivative slot FIRST:

        (nabla t)(x; y_1..y_k) = x(t(y_1..y_k)) - sum_i t(.., nabla_x y_i, ..).

    On the Lie backend the scalar-derivative term vanishes; on the chart
    backend it is a central finite difference of ``field_fn``.
    """
    d = t.dim
    k = t.order
    gamma = conn.gamma
    deriv = backend.derive_tensor(field_fn, k)
    comps = list(deriv.comps)
    size = d**k
    # subtract sum_i gamma[a][b_i][m] t[.., m, ..]
    for a in range(d):
        base_off = a * size
        for flat in range(size):
            idx = _unflatten_cached(flat, d, k)
            acc = comps[base_off + flat]
            for slot in range(k):
                bi = idx[slot]
                stride = d ** (k - 1 - slot)
                root = flat - bi * stride
                for m in range(d):
                    gv = gamma.get(a, bi, m)
                    if gv != 0:
                        tv = t.comps[root + m * stride]
                        if tv != 0:
                            acc = acc - gv * tv
            comps[base_off + flat] = acc
    return FrameTensor(d, k + 1, tuple(comps), t.backend)


_unflatten_cache: dict = {}


def _unflatten_cached(flat: int, dim: int, order: int):
    key = (dim, order)
    table = _unflatten_cache.get(key)
    if table is None:
        from .tensor import _unflatten

        table = [_unflatten(f, dim, order) for f in range(dim**order)]
        _unflatten_cache[key] = table
    return table[flat]


def curvature(
    conn: ConnectionCoeffs,
    backend,
    g: FrameTensor,
    gamma_field: Optional[Callable] = None,
) -> FrameTensor:
    """(0,4) curvature tensor of an arbitrary connection in frame
    components:

        R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_{[x,y]} z,
        R(x,y,z,u) = g(R(x,y)z, u).

    Works for deformed, non-symmetric connections; the bracket comes from
    the backend.
    """
    d = conn.dim
    gamma = conn.gamma
    C = backend.bracket_tensor()
    if gamma_field is None:
        gamma_field = conn.field
    dgamma = backend.derive_tensor(gamma_field, 3)
    z = zero(g.backend)
    mixed = []
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    acc = dgamma.get(a, b, c, e) - dgamma.get(b, a, c, e)
                    for m in range(d):
                        gbc = gamma.get(b, c, m)
                        if gbc != 0:
                            v = gamma.get(a, m, e)
                            if v != 0:
                                acc = acc + gbc * v
                        gac = gamma.get(a, c, m)
                        if gac != 0:
                            v = gamma.get(b, m, e)
                            if v != 0:
                                acc = acc - gac * v
                        cab = C.get(a, b, m)
                        if cab != 0:
                            v = gamma.get(m, c, e)
                            if v != 0:
                                acc = acc - cab * v
                    mixed.append(acc)
    mixed_t = FrameTensor(d, 4, tuple(mixed), g.backend)
    # lower the output slot with g
    comps = []
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for u in range(d):
                    acc = z
                    for e in range(d):
                        v = mixed_t.get(a, b, c, e)
                        if v != 0:
                            gv = g.get(e, u)
                            if gv != 0:
                                acc = acc + v * gv
                    comps.append(acc)
    return FrameTensor(d, 4, tuple(comps), g.backend)


def torsion_tensor(conn: ConnectionCoeffs, backend, g: FrameTensor) -> FrameTensor:
    """T(x,y,z) = g(nabla_x y - nabla_y x - [x,y], z)."""
    d = conn.dim
    gamma = conn.gamma
    C = backend.bracket_tensor()
    z = zero(g.backend)
    comps = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                acc = z
                for m in range(d):
                    v = gamma.get(i, j, m) - gamma.get(j, i, m) - C.get(i, j, m)
                    if v != 0:
                        gv = g.get(m, k)
                        if gv != 0:
                            acc = acc + v * gv
                comps.append(acc)
    return FrameTensor(d, 3, tuple(comps), g.backend)
