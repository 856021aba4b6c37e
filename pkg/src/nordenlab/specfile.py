"""Manifold spec files: TOML documents describing a structure and its
geometry backend.

Lie example::

    name = "ex-f5"
    kind = "lie"
    n = 1
    structure = "canonical"

    [[brackets]]        # [e_i, e_j] += value * e_k, xi = index 2n
    i = 2
    j = 0
    k = 0
    value = "1"         # exact rational string "p/q" or integer

Chart example::

    name = "ex-chart-exp"
    kind = "chart"
    n = 1
    structure = "canonical"

    [warp]
    kind = "exp"        # exp: a(t) = exp(c t); poly: a(t) = sum c_k t^k
    coeffs = ["1/2"]

    [evaluation]
    point = [0.0, 0.0, 0.0]
    fd_step = 1e-3
    richardson = false

A structure may also be given explicitly with ``structure = "explicit"``
and an ``[explicit]`` table holding row-major ``phi`` and ``g`` component
lists (rational strings) plus optional ``xi`` and ``eta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .geometry import ChartBackend, ChartData, LieBackend, LieFrameData, WarpFunction
from .scalars import EXACT, FLOAT, parse_scalar
from .structure import build_structure, canonical_structure
from .tensor import FrameEndo, FrameTensor


class SpecParseError(ValueError):
    """Malformed spec file; the message names the offending field."""


@dataclass(frozen=True)
class ManifoldSpec:
    name: str
    kind: str                     # "lie" | "chart"
    n: int
    structure_source: str         # "canonical" | "explicit"
    bracket_triples: tuple        # (i, j, k, rational-string)
    explicit: Optional[dict]
    warp_kind: Optional[str]
    warp_coeffs: tuple
    point: tuple
    fd_step: float
    richardson: bool

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def build(self, scalar_backend: str = EXACT):
        """(structure, backend); chart specs always use the float backend."""
        if self.kind == "chart":
            chart = ChartData(
                n=self.n,
                warp=WarpFunction(self.warp_kind, tuple(float(c) for c in self.warp_coeffs)),
                point=self.point,
                fd_step=self.fd_step,
                richardson=self.richardson,
            )
            be = ChartBackend(chart, self._structure(FLOAT))
            return be.structure, be
        s = self._structure(scalar_backend)
        triples = [
            (i, j, k, parse_scalar(v, scalar_backend)) for (i, j, k, v) in self.bracket_triples
        ]
        lie = LieFrameData.from_triples(self.dim, triples, scalar_backend)
        return s, LieBackend(s, lie)

    def _structure(self, scalar_backend: str):
        if self.structure_source == "canonical":
            return canonical_structure(self.n, scalar_backend)
        d = self.dim
        ex = self.explicit
        phi = FrameEndo.from_rows(
            [[parse_scalar(v, scalar_backend) for v in row] for row in ex["phi"]],
            scalar_backend,
        )
        g = FrameTensor.from_flat(
            d, 2, [parse_scalar(v, scalar_backend) for row in ex["g"] for v in row],
            scalar_backend,
        )
        xi = None
        if "xi" in ex:
            xi = tuple(parse_scalar(v, scalar_backend) for v in ex["xi"])
        eta = None
        if "eta" in ex:
            eta = FrameTensor.from_flat(
                d, 1, [parse_scalar(v, scalar_backend) for v in ex["eta"]], scalar_backend
            )
        return build_structure(self.n, phi, g, xi=xi, eta=eta, backend=scalar_backend)


def parse_spec(path) -> ManifoldSpec:
    """Parse and validate a manifold spec file.

    Raises SpecParseError with a field-precise message on malformed input;
    bracket antisymmetry/Jacobi and structure-axiom failures surface later
    from build() with their own named exception types.
    """
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SpecParseError(f"{path}: file not found")
    except tomllib.TOMLDecodeError as exc:
        raise SpecParseError(f"{path}: TOML syntax error: {exc}")

    def need(key, types, where="top level"):
        if key not in raw:
            raise SpecParseError(f"{path}: missing {key!r} at {where}")
        value = raw[key]
        if not isinstance(value, types):
            raise SpecParseError(f"{path}: field {key!r} has wrong type")
        return value

    name = need("name", str)
    kind = need("kind", str)
    if kind not in ("lie", "chart"):
        raise SpecParseError(f"{path}: kind must be 'lie' or 'chart', got {kind!r}")
    n = need("n", int)
    if n < 1:
        raise SpecParseError(f"{path}: n must be >= 1")
    source = raw.get("structure", "canonical")
    if source not in ("canonical", "explicit"):
        raise SpecParseError(f"{path}: structure must be 'canonical' or 'explicit'")
    dim = 2 * n + 1

    explicit = None
    if source == "explicit":
        explicit = raw.get("explicit")
        if not isinstance(explicit, dict):
            raise SpecParseError(f"{path}: structure='explicit' needs an [explicit] table")
        for key in ("phi", "g"):
            rows = explicit.get(key)
            if (
                not isinstance(rows, list)
                or len(rows) != dim
                or any(not isinstance(r, list) or len(r) != dim for r in rows)
            ):
                raise SpecParseError(f"{path}: [explicit].{key} must be a {dim}x{dim} array")
        for key in ("xi", "eta"):
            if key in explicit and (
                not isinstance(explicit[key], list) or len(explicit[key]) != dim
            ):
                raise SpecParseError(f"{path}: [explicit].{key} must have {dim} entries")

    triples = []
    warp_kind = None
    warp_coeffs = ()
    point = ()
    fd_step = 1e-3
    richardson = False

    if kind == "lie":
        for pos, row in enumerate(raw.get("brackets", [])):
            if not isinstance(row, dict):
                raise SpecParseError(f"{path}: brackets[{pos}] must be a table")
            try:
                i, j, k = int(row["i"]), int(row["j"]), int(row["k"])
                value = row["value"]
            except KeyError as exc:
                raise SpecParseError(f"{path}: brackets[{pos}] missing field {exc}")
            if not all(0 <= idx < dim for idx in (i, j, k)):
                raise SpecParseError(
                    f"{path}: brackets[{pos}] index out of range for dim {dim}"
                )
            if not isinstance(value, (str, int)):
                raise SpecParseError(
                    f"{path}: brackets[{pos}].value must be a rational string or integer"
                )
            triples.append((i, j, k, str(value)))
    else:
        warp = raw.get("warp")
        if not isinstance(warp, dict):
            raise SpecParseError(f"{path}: chart spec needs a [warp] table")
        warp_kind = warp.get("kind")
        if warp_kind not in ("exp", "poly"):
            raise SpecParseError(f"{path}: [warp].kind must be 'exp' or 'poly'")
        coeffs = warp.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs:
            raise SpecParseError(f"{path}: [warp].coeffs must be a nonempty array")
        warp_coeffs = tuple(
            float(parse_scalar(str(c), FLOAT)) for c in coeffs
        )
        ev = raw.get("evaluation", {})
        if not isinstance(ev, dict):
            raise SpecParseError(f"{path}: [evaluation] must be a table")
        pt = ev.get("point", [0.0] * dim)
        if not isinstance(pt, list) or len(pt) != dim:
            raise SpecParseError(f"{path}: [evaluation].point must have {dim} entries")
        point = tuple(float(x) for x in pt)
        fd_step = float(ev.get("fd_step", 1e-3))
        if not (1e-6 <= fd_step <= 1e-2):
            raise SpecParseError(f"{path}: fd_step {fd_step} outside [1e-6, 1e-2]")
        richardson = bool(ev.get("richardson", False))

    return ManifoldSpec(
        name=name,
        kind=kind,
        n=n,
        structure_source=source,
        bracket_triples=tuple(triples),
        explicit=explicit,
        warp_kind=warp_kind,
        warp_coeffs=warp_coeffs,
        point=point,
        fd_step=fd_step,
        richardson=richardson,
    )
