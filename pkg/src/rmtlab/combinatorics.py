"""Exact integer combinatorics: binomials, Catalan numbers, ballot counts.

Everything here returns Python ``int``; no floating point is involved.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "binomial",
    "catalan",
    "sigma",
    "sigma_bruteforce",
    "catalan_convolution",
    "catalan_convolution_bruteforce",
    "convolution_identity_holds",
    "SIGMA_BRUTEFORCE_BUDGET",
]

SIGMA_BRUTEFORCE_BUDGET = 24


def binomial(n: int, k: int) -> int:
    """C(n, k), with C(n, k) = 0 whenever k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial: n must be >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def catalan(m: int) -> int:
    if m < 0:
        raise ValueError(f"catalan: m must be >= 0, got {m}")
    return binomial(2 * m, m) // (m + 1)


def _check_sigma_args(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise ValueError(f"sigma: m and n must be >= 0, got m={m}, n={n}")
    if m + n == 0:
        raise ValueError("sigma: m + n must be positive")


def sigma(m: int, n: int) -> int:
    """Number of +-1 sequences with m+n ones and n minus-ones whose
    partial sums all stay nonnegative.

    Closed form ``C(m+2n-1, n) - C(m+2n-1, n-2)``.
    """
    _check_sigma_args(m, n)
    top = m + 2 * n - 1
    return binomial(top, n) - binomial(top, n - 2)


def sigma_bruteforce(m: int, n: int) -> int:
    """Same count as :func:`sigma`, by enumerating every +-1 sequence of
    length m + 2n and filtering on the prefix-sum condition."""
    _check_sigma_args(m, n)
    length = m + 2 * n
    if length > SIGMA_BRUTEFORCE_BUDGET:
        raise ValueError(
            f"sigma_bruteforce: sequence length {length} exceeds budget "
            f"{SIGMA_BRUTEFORCE_BUDGET}"
        )
    return int(_ballot_counts_by_enumeration(length)[n])


@lru_cache(maxsize=None)
def _ballot_counts_by_enumeration(length: int) -> tuple[int, ...]:
    """For each number of minus-ones k, how many of the 2^length sign
    sequences with k minus-ones keep all partial sums >= 0."""
    counts = np.zeros(length + 1, dtype=np.int64)
    shifts = np.arange(length, dtype=np.uint32)
    chunk = 1 << 16
    for start in range(0, 1 << length, chunk):
        codes = np.arange(start, min(start + chunk, 1 << length), dtype=np.uint32)
        minus = ((codes[:, None] >> shifts) & 1).astype(np.int8)
        prefix = np.cumsum(1 - 2 * minus, axis=1, dtype=np.int8)
        ok = prefix.min(axis=1) >= 0
        counts += np.bincount(minus[ok].sum(axis=1), minlength=length + 1)
    return tuple(int(c) for c in counts)


def catalan_convolution(m: int, s: int, min_part: int = 0) -> int:
    """Sum of C_{m_1} ... C_{m_s} over compositions m_1 + ... + m_s = m
    with every part >= ``min_part``.

    Computed by a DP over (parts used, total so far). ``s = 0`` gives the
    empty product, i.e. 1 when m == 0 and 0 otherwise.
    """
    if m < 0 or s < 0:
        raise ValueError(f"catalan_convolution: m, s must be >= 0, got m={m}, s={s}")
    if min_part not in (0, 1):
        raise ValueError(f"catalan_convolution: min_part must be 0 or 1, got {min_part}")
    cats = [catalan(k) for k in range(m + 1)]
    row = [1] + [0] * m
    for _ in range(s):
        nxt = [0] * (m + 1)
        for total, ways in enumerate(row):
            if not ways:
                continue
            for part in range(min_part, m - total + 1):
                nxt[total + part] += ways * cats[part]
        row = nxt
    return row[m]


def catalan_convolution_bruteforce(m: int, s: int, min_part: int = 0) -> int:
    """Literal enumeration of compositions; test oracle for the DP."""
    total = 0
    for parts in itertools.product(range(min_part, m + 1), repeat=s):
        if sum(parts) == m:
            total += math.prod(catalan(k) for k in parts)
    return total


@lru_cache(maxsize=None)
def convolution_identity_holds(m: int, s: int) -> bool:
    """Whether the unrestricted convolution equals C_{m+s-1}.

    The closed form is only true for s <= 2; e.g. (m=1, s=3) gives 3, not 5.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return catalan_convolution(m, s, 0) == catalan(m + s - 1)
