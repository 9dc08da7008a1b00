"""Moments of a Bernoulli(p) entry and of its centered version a - p."""

from __future__ import annotations

from fractions import Fraction

from ._validation import as_fraction, check_int, check_probability

__all__ = ["centered_moment", "raw_moment", "moment_bound_holds"]


def centered_moment(q: int, p) -> Fraction:
    """E[(a - p)^q] for a ~ Bernoulli(p), exactly.

    Uses p(1-p) [(1-p)^(q-1) - (-p)^(q-1)]; nonnegative for p <= 1/2.
    """
    q = check_int(q, name="q", minimum=1)
    p = check_probability(as_fraction(p))
    return p * (1 - p) * ((1 - p) ** (q - 1) - (-p) ** (q - 1))


def raw_moment(q: int, p) -> Fraction:
    # a^q == a for a 0/1 variable
    check_int(q, name="q", minimum=1)
    return check_probability(as_fraction(p))


def moment_bound_holds(q: int, p) -> bool:
    """Check 0 <= E[(a-p)^q] <= p (1-p)^q (1 + p/(1-p)) in exact arithmetic."""
    q = check_int(q, name="q", minimum=2)
    p = as_fraction(p)
    if not 0 < p <= Fraction(1, 2):
        raise ValueError(f"moment_bound_holds needs 0 < p <= 1/2, got {p}")
    value = centered_moment(q, p)
    bound = p * (1 - p) ** q * (1 + p / (1 - p))
    return 0 <= value <= bound
