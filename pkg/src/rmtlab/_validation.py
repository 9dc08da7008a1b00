"""Input checks shared by the public functions and estimators."""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np


def as_fraction(p, *, name: str = "p") -> Fraction:
    """Coerce ``p`` to an exact Fraction.

    Accepts Fraction, int, or a string like ``"316/10000"`` or ``"0.25"``.
    Floats are rejected: oracle code needs the exact value the caller meant.
    """
    if isinstance(p, Fraction):
        return p
    if isinstance(p, bool):
        raise TypeError(f"{name} must be a rational number, got bool")
    if isinstance(p, numbers.Integral):
        return Fraction(int(p))
    if isinstance(p, str):
        try:
            return Fraction(p.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{name}: cannot parse {p!r} as a fraction") from exc
    if isinstance(p, numbers.Rational):
        return Fraction(p.numerator, p.denominator)
    raise TypeError(f"{name} must be exact (Fraction, int or 'NUM/DEN'), got {type(p).__name__}")


def check_probability(p, *, name: str = "p", upper=1):
    if not 0 <= p <= upper:
        raise ValueError(f"{name} must lie in [0, {upper}], got {p}")
    return p


def check_int(value, *, name: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_exact_ints(values, *, name: str = "traces", min_length: int = 1) -> list[int]:
    """Return ``values`` as a list of Python ints without any float round trip."""
    if isinstance(values, np.ndarray):
        if values.dtype.kind in "iu":
            out = [int(v) for v in values.ravel()]
        elif values.dtype == object:
            out = [check_int(v, name=name) for v in values.ravel()]
        else:
            raise TypeError(f"{name} must hold integers, got dtype {values.dtype}")
    else:
        out = [check_int(v, name=name) for v in values]
    if len(out) < min_length:
        raise ValueError(f"{name} needs at least {min_length} values, got {len(out)}")
    return out


def check_float_sample(values, *, name: str = "values", min_length: int = 1) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < min_length:
        raise ValueError(f"{name} needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr
