"""Bundled example registry: the model structures every suite runs on,
with frozen golden values produced by the independent brute-force oracle
(see the test suite) and stored as package data.

Lie examples (dim 3, canonical structure, brackets of the e-slice with
xi):
  ex-flat        abelian; every tensor vanishes
  ex-f4(beta)    [xi,e1] = beta e2, [xi,e2] = -beta e1
  ex-f5(alpha)   [xi,e1] = alpha e1, [xi,e2] = alpha e2
  ex-f45(a,b)    [xi,e1] = a e1 + b e2, [xi,e2] = -b e1 + a e2

Chart examples (warped product, adapted frame e_i = a(t) d/dx^i):
  ex-chart-exp   a(t) = exp(alpha t); pointwise matches ex-f5(alpha)
  ex-chart-poly  a(t) = 1 + t^2; xi-derivatives of the 1-forms survive
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional

from .geometry import ChartBackend, ChartData, LieBackend, LieFrameData, WarpFunction
from .scalars import EXACT, FLOAT, coerce
from .structure import canonical_structure


@dataclass(frozen=True)
class RegistryExample:
    name: str
    kind: str                 # "lie" | "chart"
    description: str
    default_params: dict
    builder: Callable
    spec_file: str

    def build(self, scalar_backend: str = EXACT, **overrides):
        """(structure, backend) pair; chart examples always run on the
        float backend."""
        params = dict(self.default_params)
        params.update(overrides)
        return self.builder(scalar_backend, **params)


def _lie_example(scalar_backend: str, n: int, triples_fn):
    s = canonical_structure(n, scalar_backend)
    triples = [
        (i, j, k, coerce(v, scalar_backend)) for (i, j, k, v) in triples_fn()
    ]
    lie = LieFrameData.from_triples(2 * n + 1, triples, scalar_backend)
    return s, LieBackend(s, lie)


def _build_flat(scalar_backend, n=1):
    return _lie_example(scalar_backend, n, lambda: [])


def _build_f4(scalar_backend, beta=Fraction(1)):
    xi = 2
    return _lie_example(
        scalar_backend, 1, lambda: [(xi, 0, 1, beta), (xi, 1, 0, -beta)]
    )


def _build_f5(scalar_backend, alpha=Fraction(1)):
    xi = 2
    return _lie_example(
        scalar_backend, 1, lambda: [(xi, 0, 0, alpha), (xi, 1, 1, alpha)]
    )


def _build_f45(scalar_backend, alpha=Fraction(1), beta=Fraction(1)):
    xi = 2
    return _lie_example(
        scalar_backend,
        1,
        lambda: [
            (xi, 0, 0, alpha),
            (xi, 0, 1, beta),
            (xi, 1, 0, -beta),
            (xi, 1, 1, alpha),
        ],
    )


def _build_chart_exp(scalar_backend, alpha=0.5, t=0.0, fd_step=1e-3, richardson=False):
    chart = ChartData(
        n=1,
        warp=WarpFunction("exp", (float(alpha),)),
        point=(0.0, 0.0, float(t)),
        fd_step=float(fd_step),
        richardson=bool(richardson),
    )
    be = ChartBackend(chart)
    return be.structure, be


def _build_chart_poly(scalar_backend, coeffs=(1.0, 0.0, 1.0), t=1.0, fd_step=1e-3, richardson=False):
    chart = ChartData(
        n=1,
        warp=WarpFunction("poly", tuple(float(c) for c in coeffs)),
        point=(0.0, 0.0, float(t)),
        fd_step=float(fd_step),
        richardson=bool(richardson),
    )
    be = ChartBackend(chart)
    return be.structure, be


_EXAMPLES = (
    RegistryExample(
        "ex-flat", "lie", "abelian frame, every derived tensor vanishes",
        {"n": 1}, _build_flat, "ex-flat.spec",
    ),
    RegistryExample(
        "ex-f4", "lie", "pure rotation derivation; theta survives",
        {"beta": Fraction(1)}, _build_f4, "ex-f4.spec",
    ),
    RegistryExample(
        "ex-f5", "lie", "pure scaling derivation; theta_star survives",
        {"alpha": Fraction(1)}, _build_f5, "ex-f5.spec",
    ),
    RegistryExample(
        "ex-f45", "lie", "mixed scaling+rotation derivation",
        {"alpha": Fraction(1), "beta": Fraction(1)}, _build_f45, "ex-f45.spec",
    ),
    RegistryExample(
        "ex-chart-exp", "chart", "exponential warp; frame-equivalent to ex-f5",
        {"alpha": 0.5, "t": 0.0, "fd_step": 1e-3}, _build_chart_exp, "ex-chart-exp.spec",
    ),
    RegistryExample(
        "ex-chart-poly", "chart", "polynomial warp 1+t^2; nonconstant 1-forms",
        {"coeffs": (1.0, 0.0, 1.0), "t": 1.0, "fd_step": 1e-3}, _build_chart_poly,
        "ex-chart-poly.spec",
    ),
)


def registry() -> dict:
    return {ex.name: ex for ex in _EXAMPLES}


def build_example(name: str, scalar_backend: str = EXACT, **overrides):
    ex = registry().get(name)
    if ex is None:
        raise KeyError(f"unknown registry example {name!r}; known: {sorted(registry())}")
    return ex.build(scalar_backend, **overrides)


def spec_path(name: str):
    """Filesystem path of a bundled spec file (as a context-free Path)."""
    ex = registry().get(name)
    if ex is None:
        raise KeyError(f"unknown registry example {name!r}")
    return resources.files("nordenlab").joinpath("data", "specs", ex.spec_file)


def load_golden(name: str) -> Optional[dict]:
    """Frozen expected values for a registry example, or None."""
    path = resources.files("nordenlab").joinpath("data", "golden", f"{name}.json")
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return None
    return json.loads(text)
