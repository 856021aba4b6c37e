"""Seeded random inputs for property sweeps: Jacobi-valid Lie frames and
rational parameter vectors.

Random algebras are generated 2-step nilpotent (bracket values confined
to a central slice) and optionally extended by a derivation acting as the
bracket with xi; the Jacobi identity is then verified, never assumed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import LieFrameData
from .scalars import EXACT
from .structure import AcnStructure, canonical_structure


def random_fraction(rng: random.Random, span: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_ten_params(rng: random.Random):
    from .connections import TenParams

    return TenParams.from_seq([random_fraction(rng) for _ in range(10)])


def random_four_params(rng: random.Random):
    from .connections import FourParamsS

    return FourParamsS(*[random_fraction(rng) for _ in range(4)])


def random_lambda_mu(rng: random.Random):
    from .connections import LambdaMu

    return LambdaMu(random_fraction(rng), random_fraction(rng))


def random_nilpotent_lie(rng: random.Random, n: int) -> LieFrameData:
    """A 2-step nilpotent algebra, optionally xi-extended.

    Modes: abelian e-slice with a random derivation as [xi, .] (covers the
    pure-class model algebras); or a central e-bracket with a derivation
    vanishing on the center.  Jacobi is re-verified on the result.
    """
    dim = 2 * n + 1
    xi = dim - 1
    triples = []
    mode = rng.choice(["abelian_derivation", "central_bracket"])
    if mode == "abelian_derivation":
        # [xi, e_i] = sum_j D[j][i] e_j with D arbitrary
        for i in range(dim - 1):
            for j in range(dim - 1):
                v = random_fraction(rng)
                if v != 0 and rng.random() < 0.6:
                    triples.append((xi, i, j, v))
    else:
        # split the e-slice into a bracket-generating part V and a central
        # part Z; [V,V] lands in Z, the derivation maps V into Z
        if dim - 1 < 2:
            return LieFrameData.abelian(dim)
        split = max(1, (dim - 1) // 2)
        v_idx = list(range(split))
        z_idx = list(range(split, dim - 1))
        for a in range(len(v_idx)):
            for b in range(a + 1, len(v_idx)):
                for k in z_idx:
                    v = random_fraction(rng)
                    if v != 0 and rng.random() < 0.7:
                        triples.append((v_idx[a], v_idx[b], k, v))
        for i in v_idx:
            for k in z_idx:
                v = random_fraction(rng)
                if v != 0 and rng.random() < 0.5:
                    triples.append((xi, i, k, v))
    lie = LieFrameData.from_triples(dim, triples)
    lie.validate(tol=0)
    return lie


def random_structure(rng: random.Random, n: int) -> tuple:
    """(canonical structure, random Jacobi-valid Lie frame) pair."""
    from .geometry import LieBackend

    s = canonical_structure(n, EXACT)
    lie = random_nilpotent_lie(rng, n)
    return s, LieBackend(s, lie, validated=True)
