"""Exact trace-moment oracles for small symmetric Bernoulli matrices.

Two independent routes to E[tr(M^q)] for M = A (raw 0/1 entries) or
M = A - p (centered entries):

* :func:`walk_expectation` sums over closed walks, factoring the
  expectation over distinct undirected edges;
* :func:`config_moments` enumerates every 0/1 edge configuration and takes
  exact integer matrix powers.

All values are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from ._validation import as_fraction, check_int, check_probability
from .combinatorics import catalan
from .moments import centered_moment
from .walks import DEFAULT_WALK_BUDGET, BudgetExceeded, enumerate_closed_walks, walk_edges

__all__ = [
    "MatrixKind",
    "OracleResult",
    "walk_expectation",
    "config_moments",
    "oracle_crosscheck",
    "simple_cycle_lower_bound",
    "simple_cycle_lower_bound_check",
    "CONFIG_SLOT_BUDGET",
]

CONFIG_SLOT_BUDGET = 16


class MatrixKind(str, enum.Enum):
    RAW = "raw"
    CENTERED = "centered"


@dataclass(frozen=True)
class OracleResult:
    n: int
    q: int
    p: Fraction
    loops: bool
    kind: MatrixKind
    expectation: Fraction
    variance: Fraction | None = None


def _kind(kind) -> MatrixKind:
    return kind if isinstance(kind, MatrixKind) else MatrixKind(kind)


def walk_expectation(n: int, q: int, p, loops: bool = True, kind=MatrixKind.RAW,
                     budget: int = DEFAULT_WALK_BUDGET) -> Fraction:
    """E[tr(M^q)] as a sum over closed walks.

    Raw entries satisfy a^k = a, so a walk contributes p^(distinct edges).
    Centered entries contribute the product of centered moments over the
    walk's distinct edges, which vanishes if some edge appears once.
    """
    n = check_int(n, name="n", minimum=1)
    q = check_int(q, name="q", minimum=1)
    p = check_probability(as_fraction(p))
    kind = _kind(kind)
    # group walks by their multiset of edge multiplicities; exact sums of
    # products are then evaluated once per shape
    shapes: Counter = Counter()
    for walk in enumerate_closed_walks(n, q, loops, budget):
        mult = Counter(walk_edges(walk))
        if kind is MatrixKind.RAW:
            shapes[len(mult)] += 1
        else:
            shapes[tuple(sorted(mult.values()))] += 1
    total = Fraction(0)
    if kind is MatrixKind.RAW:
        for distinct, count in shapes.items():
            total += count * p**distinct
        return total
    moments = {k: centered_moment(k, p) for k in range(1, q + 1)}
    for shape, count in shapes.items():
        total += count * math.prod((moments[k] for k in shape), start=Fraction(1))
    return total


def _slots(n: int, loops: bool) -> list[tuple[int, int]]:
    if loops:
        return [(i, j) for i in range(n) for j in range(i, n)]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _matmul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _power_traces(matrix, q_max: int) -> list[int]:
    """[tr(M^1), ..., tr(M^q_max)] for an integer matrix."""
    traces = []
    power = matrix
    for q in range(1, q_max + 1):
        if q > 1:
            power = _matmul(power, matrix)
        traces.append(sum(power[i][i] for i in range(len(matrix))))
    return traces


def config_moments(n: int, q_max: int, p, loops: bool = True) -> list[OracleResult]:
    """Exact mean and variance of tr(A^q) and tr((A-p)^q), q = 1..q_max.

    Enumerates all 2^slots edge configurations. Centered matrices are
    scaled by den(p), giving integer entries den*a - num, so powers stay in
    exact integers; the scale is divided out at the end.
    """
    n = check_int(n, name="n", minimum=1)
    q_max = check_int(q_max, name="q_max", minimum=1)
    p = check_probability(as_fraction(p))
    slots = _slots(n, loops)
    if len(slots) > CONFIG_SLOT_BUDGET:
        raise BudgetExceeded(
            f"{len(slots)} edge slots exceed configuration budget {CONFIG_SLOT_BUDGET}"
        )
    num, den = p.numerator, p.denominator
    n_slots = len(slots)
    # sums[kind][present][q] -> (sum tr, sum tr^2), grouped by number of
    # present edges so the probability weight is applied once per group
    sums = {
        kind: [[[0, 0] for _ in range(q_max)] for _ in range(n_slots + 1)]
        for kind in MatrixKind
    }
    for bits in itertools.product((0, 1), repeat=n_slots):
        raw = [[0] * n for _ in range(n)]
        cen = [[-num] * n for _ in range(n)] if loops else [
            [0 if i == j else -num for j in range(n)] for i in range(n)
        ]
        for (i, j), b in zip(slots, bits):
            if b:
                raw[i][j] = raw[j][i] = 1
                cen[i][j] = cen[j][i] = den - num
        present = sum(bits)
        for kind, matrix in ((MatrixKind.RAW, raw), (MatrixKind.CENTERED, cen)):
            acc = sums[kind][present]
            for q, tr in enumerate(_power_traces(matrix, q_max)):
                acc[q][0] += tr
                acc[q][1] += tr * tr
    weights = [p**k * (1 - p) ** (n_slots - k) for k in range(n_slots + 1)]
    results = []
    for kind in MatrixKind:
        for q in range(1, q_max + 1):
            first = sum(w * sums[kind][k][q - 1][0] for k, w in enumerate(weights))
            second = sum(w * sums[kind][k][q - 1][1] for k, w in enumerate(weights))
            if kind is MatrixKind.CENTERED:
                first /= den**q
                second /= den ** (2 * q)
            results.append(
                OracleResult(n, q, p, loops, kind, Fraction(first), Fraction(second - first * first))
            )
    return results


def oracle_crosscheck(n: int, q: int, p, loops: bool = True) -> bool:
    """True iff both oracles give identical expectations for both kinds."""
    by_kind = {
        r.kind: r.expectation for r in config_moments(n, q, p, loops) if r.q == q
    }
    return all(
        walk_expectation(n, q, p, loops, kind) == by_kind[kind] for kind in MatrixKind
    )


def simple_cycle_lower_bound(n: int, m: int, p) -> Fraction:
    """C_m (p(1-p))^m n(n-1)...(n-m): the simple even cycle contribution."""
    p = as_fraction(p)
    falling = math.prod(n - i for i in range(m + 1))
    return catalan(m) * (p * (1 - p)) ** m * falling


def simple_cycle_lower_bound_check(n: int, m: int, p, loops: bool = True) -> bool:
    """E[tr((A-p)^(2m))] >= C_m (p(1-p))^m n(n-1)...(n-m), exactly."""
    n = check_int(n, name="n", minimum=1)
    m = check_int(m, name="m", minimum=1)
    p = as_fraction(p)
    if not 0 <= p <= Fraction(1, 2):
        raise ValueError(f"lower bound needs p <= 1/2, got {p}")
    if n < m + 1:
        raise ValueError(f"lower bound needs n >= m + 1, got n={n}, m={m}")
    value = walk_expectation(n, 2 * m, p, loops, MatrixKind.CENTERED)
    return value >= simple_cycle_lower_bound(n, m, p)
