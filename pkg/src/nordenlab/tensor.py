"""Dense frame-indexed multilinear algebra over a pluggable scalar field.

Covariant (0,k) tensors are stored as flat row-major component tuples over
a fixed frame of odd dimension 2n+1.  Contractions are explicit slot
pairs; there is deliberately no index-notation DSL, the loops stay
auditable.  All values are immutable after construction.

Conventions used throughout the package:
  * the frame is ``e_0, ..., e_{2n-1}, xi`` with xi the LAST basis vector;
  * ``FrameEndo`` stores the output index first: ``endo[m][a]`` is the
    e_m-component of the image of e_a;
  * (1,2) objects (connection coefficients, raised deformations) are kept
    as order-3 ``FrameTensor``s with the output index in the LAST slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .scalars import EXACT, Scalar, check_backend, one, zero


class ShapeError(ValueError):
    """Dimension or slot mismatch between tensor operands."""


class DegenerateMetricError(ValueError):
    """The supplied metric (or matrix) is singular."""


def _check_same(a, b):
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.backend != b.backend:
        raise ShapeError(f"backend mismatch: {a.backend} vs {b.backend}")


@dataclass(frozen=True)
class FrameTensor:
    """A (0,k) tensor as a dense component array over the frame."""

    dim: int
    order: int
    comps: tuple
    backend: str

    def __post_init__(self):
        check_backend(self.backend)
        if self.dim < 3 or self.dim % 2 == 0:
            raise ShapeError(f"frame dimension must be odd and >= 3, got {self.dim}")
        if self.order < 0:
            raise ShapeError(f"tensor order must be >= 0, got {self.order}")
        if len(self.comps) != self.dim**self.order:
            raise ShapeError(
                f"component array has {len(self.comps)} entries, "
                f"expected {self.dim}**{self.order}"
            )

    @classmethod
    def zeros(cls, dim: int, order: int, backend: str) -> "FrameTensor":
        z = zero(backend)
        return cls(dim, order, (z,) * dim**order, backend)

    @classmethod
    def from_flat(cls, dim: int, order: int, comps: Iterable, backend: str) -> "FrameTensor":
        return cls(dim, order, tuple(comps), backend)

    @classmethod
    def from_function(
        cls, dim: int, order: int, fn: Callable[..., Scalar], backend: str
    ) -> "FrameTensor":
        comps = []
        for flat in range(dim**order):
            comps.append(fn(*_unflatten(flat, dim, order)))
        return cls(dim, order, tuple(comps), backend)

    def flat_index(self, idx: Sequence[int]) -> int:
        if len(idx) != self.order:
            raise ShapeError(f"expected {self.order} indices, got {len(idx)}")
        flat = 0
        for i in idx:
            flat = flat * self.dim + i
        return flat

    def get(self, *idx: int) -> Scalar:
        return self.comps[self.flat_index(idx)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.comps)


def _unflatten(flat: int, dim: int, order: int) -> tuple:
    idx = [0] * order
    for pos in range(order - 1, -1, -1):
        idx[pos] = flat % dim
        flat //= dim
    return tuple(idx)


@dataclass(frozen=True)
class FrameEndo:
    """A (1,1) tensor; ``rows[m][a]`` is the e_m-component of the image of e_a."""

    dim: int
    rows: tuple
    backend: str

    def __post_init__(self):
        check_backend(self.backend)
        if len(self.rows) != self.dim or any(len(r) != self.dim for r in self.rows):
            raise ShapeError(f"endomorphism must be {self.dim}x{self.dim}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], backend: str) -> "FrameEndo":
        return cls(len(rows), tuple(tuple(r) for r in rows), backend)

    @classmethod
    def identity(cls, dim: int, backend: str) -> "FrameEndo":
        o, z = one(backend), zero(backend)
        return cls(dim, tuple(tuple(o if i == j else z for j in range(dim)) for i in range(dim)), backend)

    def apply(self, vec: Sequence[Scalar]) -> tuple:
        z = zero(self.backend)
        out = []
        for m in range(self.dim):
            acc = z
            row = self.rows[m]
            for a in range(self.dim):
                v = vec[a]
                if v != 0 and row[a] != 0:
                    acc = acc + row[a] * v
            out.append(acc)
        return tuple(out)

    def compose(self, other: "FrameEndo") -> "FrameEndo":
        """Matrix product self . other (apply other first)."""
        _check_same(self, other)
        d = self.dim
        z = zero(self.backend)
        rows = []
        for m in range(d):
            row = []
            for a in range(d):
                acc = z
                for k in range(d):
                    x = self.rows[m][k]
                    y = other.rows[k][a]
                    if x != 0 and y != 0:
                        acc = acc + x * y
                row.append(acc)
            rows.append(tuple(row))
        return FrameEndo(d, tuple(rows), self.backend)

    def column_support(self) -> list:
        """Per input index a, the list of (m, coeff) with nonzero coeff."""
        cols = [[] for _ in range(self.dim)]
        for m in range(self.dim):
            for a in range(self.dim):
                c = self.rows[m][a]
                if c != 0:
                    cols[a].append((m, c))
        return cols


# ---------------------------------------------------------------------------
# elementwise algebra


def tensor_add(a: FrameTensor, b: FrameTensor) -> FrameTensor:
    _check_same(a, b)
    if a.order != b.order:
        raise ShapeError(f"order mismatch: {a.order} vs {b.order}")
    return FrameTensor(a.dim, a.order, tuple(x + y for x, y in zip(a.comps, b.comps)), a.backend)


def tensor_sub(a: FrameTensor, b: FrameTensor) -> FrameTensor:
    _check_same(a, b)
    if a.order != b.order:
        raise ShapeError(f"order mismatch: {a.order} vs {b.order}")
    return FrameTensor(a.dim, a.order, tuple(x - y for x, y in zip(a.comps, b.comps)), a.backend)


def tensor_scale(a: FrameTensor, c: Scalar) -> FrameTensor:
    if c == 0:
        return FrameTensor.zeros(a.dim, a.order, a.backend)
    return FrameTensor(a.dim, a.order, tuple(c * x for x in a.comps), a.backend)


def tensor_neg(a: FrameTensor) -> FrameTensor:
    return FrameTensor(a.dim, a.order, tuple(-x for x in a.comps), a.backend)


def tensor_combine(base: FrameTensor, terms: Iterable) -> FrameTensor:
    """base + sum of coeff*tensor pairs, skipping zero coefficients."""
    acc = list(base.comps)
    for coeff, tens in terms:
        if coeff == 0:
            continue
        _check_same(base, tens)
        comps = tens.comps
        for i, v in enumerate(comps):
            if v != 0:
                acc[i] = acc[i] + coeff * v
    return FrameTensor(base.dim, base.order, tuple(acc), base.backend)


# ---------------------------------------------------------------------------
# structural ops


def permute(a: FrameTensor, perm: Sequence[int]) -> FrameTensor:
    """Reorder slots: result[i_0..] = a[i_{perm[0]}, i_{perm[1]}, ...]."""
    if sorted(perm) != list(range(a.order)):
        raise ShapeError(f"{perm} is not a permutation of {a.order} slots")
    d, k = a.dim, a.order
    comps = [zero(a.backend)] * len(a.comps)
    for flat, v in enumerate(a.comps):
        idx = _unflatten(flat, d, k)
        src = tuple(idx[perm[p]] for p in range(k))
        comps[flat] = a.comps[a.flat_index(src)]
    return FrameTensor(d, k, tuple(comps), a.backend)


def outer(a: FrameTensor, b: FrameTensor) -> FrameTensor:
    """Tensor product; slots of a followed by slots of b."""
    _check_same(a, b)
    comps = []
    for x in a.comps:
        if x == 0:
            comps.extend([zero(a.backend)] * len(b.comps))
        else:
            comps.extend(x * y for y in b.comps)
    return FrameTensor(a.dim, a.order + b.order, tuple(comps), a.backend)


def contract(a: FrameTensor, b: FrameTensor, slot_a: int, slot_b: int) -> FrameTensor:
    """Sum the paired slots over the frame.

    The result keeps the remaining slots of ``a`` (in order) followed by
    the remaining slots of ``b``.
    """
    _check_same(a, b)
    if not 0 <= slot_a < a.order:
        raise ShapeError(f"slot {slot_a} out of range for order-{a.order} tensor")
    if not 0 <= slot_b < b.order:
        raise ShapeError(f"slot {slot_b} out of range for order-{b.order} tensor")
    d = a.dim
    ka, kb = a.order - 1, b.order - 1
    z = zero(a.backend)

    stride_a = d ** (a.order - 1 - slot_a)
    stride_b = d ** (b.order - 1 - slot_b)

    # enumerate flat offsets of a with slot_a fixed to zero
    a_bases = _fixed_slot_offsets(d, a.order, slot_a)
    b_bases = _fixed_slot_offsets(d, b.order, slot_b)

    comps = []
    for off_a in a_bases:
        for off_b in b_bases:
            acc = z
            for m in range(d):
                x = a.comps[off_a + m * stride_a]
                if x == 0:
                    continue
                y = b.comps[off_b + m * stride_b]
                if y != 0:
                    acc = acc + x * y
            comps.append(acc)
    return FrameTensor(d, ka + kb, tuple(comps), a.backend)


def _fixed_slot_offsets(dim: int, order: int, slot: int) -> list:
    """Flat offsets of all index tuples with the given slot pinned to 0,
    ordered row-major by the remaining slots."""
    rest = order - 1
    offsets = []
    strides = [dim ** (order - 1 - p) for p in range(order)]
    rest_strides = [strides[p] for p in range(order) if p != slot]
    for flat in range(dim**rest):
        idx = _unflatten(flat, dim, rest)
        offsets.append(sum(i * s for i, s in zip(idx, rest_strides)))
    return offsets


def trace_pair(a: FrameTensor, s1: int, s2: int) -> FrameTensor:
    """Sum over equal indices in two slots of the same tensor."""
    if s1 == s2 or not (0 <= s1 < a.order and 0 <= s2 < a.order):
        raise ShapeError(f"invalid trace slots ({s1},{s2}) for order {a.order}")
    d = a.dim
    lo, hi = min(s1, s2), max(s1, s2)
    z = zero(a.backend)
    comps = []
    for flat in range(d ** (a.order - 2)):
        rest = _unflatten(flat, d, a.order - 2)
        acc = z
        for m in range(d):
            idx = list(rest)
            idx.insert(lo, m)
            idx.insert(hi, m)
            acc = acc + a.comps[a.flat_index(idx)]
        comps.append(acc)
    return FrameTensor(d, a.order - 2, tuple(comps), a.backend)


def apply_endo(a: FrameTensor, endo: FrameEndo, slot: int) -> FrameTensor:
    """Feed the image of the slot's argument through the endomorphism:
    result(..., x, ...) = a(..., endo(x), ...)."""
    if a.dim != endo.dim or a.backend != endo.backend:
        raise ShapeError("tensor/endomorphism mismatch")
    if not 0 <= slot < a.order:
        raise ShapeError(f"slot {slot} out of range for order-{a.order} tensor")
    d = a.dim
    z = zero(a.backend)
    cols = endo.column_support()
    stride = d ** (a.order - 1 - slot)
    bases = _fixed_slot_offsets(d, a.order, slot)
    comps = [z] * len(a.comps)
    for off in bases:
        for target in range(d):
            acc = z
            for m, coeff in cols[target]:
                v = a.comps[off + m * stride]
                if v != 0:
                    acc = acc + coeff * v
            comps[off + target * stride] = acc
    return FrameTensor(d, a.order, tuple(comps), a.backend)


def plug_vector(a: FrameTensor, vec: Sequence[Scalar], slot: int) -> FrameTensor:
    """Insert a fixed vector into one slot, lowering the order by one."""
    if not 0 <= slot < a.order:
        raise ShapeError(f"slot {slot} out of range for order-{a.order} tensor")
    d = a.dim
    if len(vec) != d:
        raise ShapeError("vector length does not match frame dimension")
    z = zero(a.backend)
    stride = d ** (a.order - 1 - slot)
    comps = []
    for off in _fixed_slot_offsets(d, a.order, slot):
        acc = z
        for m in range(d):
            v = vec[m]
            if v == 0:
                continue
            x = a.comps[off + m * stride]
            if x != 0:
                acc = acc + v * x
        comps.append(acc)
    return FrameTensor(d, a.order - 1, tuple(comps), a.backend)


def antisymmetrize_pair(a: FrameTensor, s1: int, s2: int) -> FrameTensor:
    perm = list(range(a.order))
    perm[s1], perm[s2] = perm[s2], perm[s1]
    return tensor_sub(a, permute(a, perm))


def symmetrize_pair(a: FrameTensor, s1: int, s2: int) -> FrameTensor:
    perm = list(range(a.order))
    perm[s1], perm[s2] = perm[s2], perm[s1]
    return tensor_add(a, permute(a, perm))


# ---------------------------------------------------------------------------
# residual measurements


def max_abs(a: FrameTensor) -> Scalar:
    m = zero(a.backend)
    for c in a.comps:
        v = -c if c < 0 else c
        if v > m:
            m = v
    return m


def nonzero_count(a: FrameTensor) -> int:
    return sum(1 for c in a.comps if c != 0)


def tensors_equal(a: FrameTensor, b: FrameTensor) -> bool:
    _check_same(a, b)
    return a.order == b.order and a.comps == b.comps


# ---------------------------------------------------------------------------
# metric machinery


def _invert_rows(rows, backend: str):
    """Gauss-Jordan inverse of a square matrix given as nested lists.

    Exact backend pivots on any nonzero entry; float backend uses partial
    pivoting by magnitude.  Raises DegenerateMetricError when singular.
    """
    d = len(rows)
    aug = [list(r) + [one(backend) if i == j else zero(backend) for j in range(d)]
           for i, r in enumerate(rows)]
    for col in range(d):
        pivot_row = None
        if backend == EXACT:
            for r in range(col, d):
                if aug[r][col] != 0:
                    pivot_row = r
                    break
        else:
            best = 0.0
            for r in range(col, d):
                v = abs(aug[r][col])
                if v > best:
                    best = v
                    pivot_row = r
            if best <= 1e-14:
                pivot_row = None
        if pivot_row is None:
            raise DegenerateMetricError("matrix is singular")
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(d):
            if r == col:
                continue
            f = aug[r][col]
            if f != 0:
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def invert_metric(g: FrameTensor) -> FrameTensor:
    """Inverse of a symmetric nondegenerate order-2 tensor; g.g^{-1} = delta."""
    if g.order != 2:
        raise ShapeError("invert_metric expects an order-2 tensor")
    d = g.dim
    for i in range(d):
        for j in range(i + 1, d):
            if g.get(i, j) != g.get(j, i):
                if g.backend == EXACT or abs(g.get(i, j) - g.get(j, i)) > 1e-12:
                    raise ShapeError("metric is not symmetric")
    rows = [[g.get(i, j) for j in range(d)] for i in range(d)]
    inv = _invert_rows(rows, g.backend)
    return FrameTensor(d, 2, tuple(v for row in inv for v in row), g.backend)


def kronecker(dim: int, backend: str) -> FrameTensor:
    o, z = one(backend), zero(backend)
    return FrameTensor(
        dim, 2, tuple(o if i == j else z for i in range(dim) for j in range(dim)), backend
    )


def lower_endo(e: FrameEndo, g: FrameTensor) -> FrameTensor:
    """The (0,2) tensor g(e(x), y)."""
    d = e.dim
    z = zero(e.backend)
    comps = []
    for x in range(d):
        for y in range(d):
            acc = z
            for m in range(d):
                c = e.rows[m][x]
                if c != 0:
                    gmy = g.get(m, y)
                    if gmy != 0:
                        acc = acc + c * gmy
            comps.append(acc)
    return FrameTensor(d, 2, tuple(comps), e.backend)


def raise_endo(t: FrameTensor, g_inv: FrameTensor) -> FrameEndo:
    """Inverse of lower_endo: recover e with g(e(x), y) = t(x, y)."""
    if t.order != 2:
        raise ShapeError("raise_endo expects an order-2 tensor")
    d = t.dim
    z = zero(t.backend)
    rows = [[z] * d for _ in range(d)]
    for x in range(d):
        for m in range(d):
            acc = z
            for y in range(d):
                v = t.get(x, y)
                if v != 0:
                    w = g_inv.get(y, m)
                    if w != 0:
                        acc = acc + v * w
            rows[m][x] = acc
    return FrameEndo(d, tuple(tuple(r) for r in rows), t.backend)


def lower_slot(t: FrameTensor, g: FrameTensor, slot: int) -> FrameTensor:
    """Contract a raised (output) slot with the metric, keeping slot order."""
    moved = contract(t, g, slot, 0)
    return _move_last_to(moved, slot)


def raise_slot(t: FrameTensor, g_inv: FrameTensor, slot: int) -> FrameTensor:
    moved = contract(t, g_inv, slot, 0)
    return _move_last_to(moved, slot)


def _move_last_to(t: FrameTensor, slot: int) -> FrameTensor:
    """Move the last slot into the named position, keeping the others in
    order: result[..., i at slot, ...] = t[others..., i]."""
    k = t.order
    if slot == k - 1:
        return t
    perm = [p for p in range(k) if p != slot] + [slot]
    return permute(t, perm)
