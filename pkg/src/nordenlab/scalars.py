"""Scalar field backends: exact rationals and 64-bit floats.

Every tensor in this package carries a backend tag, either EXACT
(``fractions.Fraction`` components, decidable equality, zero-residual
proofs) or FLOAT (ordinary ``float`` components, tolerance-based
comparisons).  All algorithms are generic over the two; no computation
ever mixes backends.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

EXACT = "exact"
FLOAT = "float"

Scalar = Union[Fraction, float]


class BackendError(ValueError):
    """Raised when a value cannot be coerced into the requested backend."""


def check_backend(backend: str) -> str:
    if backend not in (EXACT, FLOAT):
        raise BackendError(f"unknown scalar backend {backend!r}")
    return backend


def zero(backend: str) -> Scalar:
    return Fraction(0) if backend == EXACT else 0.0


def one(backend: str) -> Scalar:
    return Fraction(1) if backend == EXACT else 1.0


def half(backend: str) -> Scalar:
    return Fraction(1, 2) if backend == EXACT else 0.5


def coerce(value, backend: str) -> Scalar:
    """Coerce an int, Fraction, float or rational string into the backend."""
    if backend == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return parse_rational(value)
        if isinstance(value, float):
            if value != int(value):
                raise BackendError(
                    f"refusing to coerce non-integral float {value!r} to the exact "
                    "backend; pass a 'p/q' string instead"
                )
            return Fraction(int(value))
        raise BackendError(f"cannot coerce {value!r} to exact scalar")
    if isinstance(value, str):
        return float(parse_rational(value))
    return float(value)


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q', integer or decimal text into an exact Fraction."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        if "." in text or "e" in text.lower():
            return Fraction(text)
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise BackendError(f"malformed rational literal {text!r}: {exc}") from exc


def parse_scalar(text: str, backend: str) -> Scalar:
    value = parse_rational(text)
    return value if backend == EXACT else float(value)


def is_exact(backend: str) -> bool:
    return backend == EXACT


def format_scalar(value) -> str:
    """Canonical text form used in reports: exact values as p/q, floats via repr."""
    if isinstance(value, (Fraction, int)):
        return str(value)
    return repr(float(value))
