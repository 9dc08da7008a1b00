"""Closed walks on labeled vertices and their marked-edge encoding.

A closed walk of length q is a tuple ``(i_0, ..., i_{q-1})`` of vertex
labels; its k-th edge (1-based) is ``(i_{k-1}, i_k)`` with ``i_q = i_0``.
Undirected edges are keyed as ``(min(u, v), max(u, v))`` so a loop at u is
``(u, u)``.

An edge is *marked* when an even number of earlier edges coincide with it
as undirected edges; the right endpoint of a marked edge receives a mark.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ._validation import check_int

__all__ = [
    "MarkingProfile",
    "LemmaReport",
    "EncodingSummary",
    "BudgetExceeded",
    "walk_edges",
    "edge_multiplicities",
    "mark_walk",
    "enumerate_closed_walks",
    "count_closed_walks",
    "is_expectation_nonzero",
    "check_counting_lemmas",
    "verify_encoding",
    "DEFAULT_WALK_BUDGET",
]

DEFAULT_WALK_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


def _key(u, v):
    return (u, v) if u <= v else (v, u)


def walk_edges(walk: Sequence) -> list[tuple]:
    """Undirected edge keys of ``walk`` in traversal order."""
    q = len(walk)
    if q == 0:
        raise ValueError("a closed walk needs at least one edge")
    return [_key(walk[k - 1], walk[k % q]) for k in range(1, q + 1)]


def edge_multiplicities(walk: Sequence) -> Counter:
    return Counter(walk_edges(walk))


@dataclass(frozen=True)
class MarkingProfile:
    """Marking data of one closed walk.

    ``n_k`` maps k >= 1 to the number of walk vertices marked exactly k
    times; ``n0`` counts walk vertices never marked (at most the start
    vertex). Vertices of the label set that the walk never visits are not
    represented.
    """

    q: int
    start: object
    marked: tuple[bool, ...]
    vertex_marks: dict
    n_k: dict
    n0: int
    odd_edges: frozenset
    distinct_edges: int

    @property
    def marked_count(self) -> int:
        return sum(self.marked)

    @property
    def weighted_marks(self) -> int:
        """sum over k >= 1 of k * n_k."""
        return sum(k * c for k, c in self.n_k.items())

    @property
    def heavy_marks(self) -> int:
        """sum over k >= 2 of k * n_k."""
        return sum(k * c for k, c in self.n_k.items() if k >= 2)

    @property
    def marked_vertices(self) -> int:
        return sum(self.n_k.values())

    def n_tuple(self, n: int | None = None) -> tuple[int, ...]:
        """``(n_1, ..., n_q)``; with ``n`` given, ``(n_0, n_1, ..., n_q)``
        using the global convention n_0 = n - sum_k n_k."""
        body = tuple(self.n_k.get(k, 0) for k in range(1, self.q + 1))
        if n is None:
            return body
        return (n - sum(body),) + body


def mark_walk(walk: Sequence) -> MarkingProfile:
    walk = tuple(walk)
    q = len(walk)
    edges = walk_edges(walk)
    seen: Counter = Counter()
    marked = []
    vertex_marks = {v: 0 for v in walk}
    for k, e in enumerate(edges, start=1):
        is_marked = seen[e] % 2 == 0
        marked.append(is_marked)
        if is_marked:
            vertex_marks[walk[k % q]] += 1
        seen[e] += 1
    n_k = Counter(c for c in vertex_marks.values() if c > 0)
    n0 = sum(1 for c in vertex_marks.values() if c == 0)
    odd = frozenset(e for e, c in seen.items() if c % 2)
    return MarkingProfile(
        q=q,
        start=walk[0],
        marked=tuple(marked),
        vertex_marks=vertex_marks,
        n_k=dict(sorted(n_k.items())),
        n0=n0,
        odd_edges=odd,
        distinct_edges=len(seen),
    )


def count_closed_walks(n: int, q: int, loops: bool) -> int:
    """Number of closed walks of length q on n labels.

    Equals tr(J^q) for J the all-ones matrix (loops) or J - I (no loops).
    """
    if loops:
        return n**q
    return (n - 1) ** q + (n - 1) * (-1) ** q


def enumerate_closed_walks(
    n: int, q: int, loops: bool = True, budget: int = DEFAULT_WALK_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Yield every closed walk of length ``q`` on labels ``1..n`` in
    lexicographic order. With ``loops=False`` no step (including the
    closing one) may stay at the same vertex."""
    n = check_int(n, name="n", minimum=1)
    q = check_int(q, name="q", minimum=1)
    if n**q > budget:
        raise BudgetExceeded(f"n^q = {n}^{q} exceeds walk budget {budget}")
    labels = range(1, n + 1)
    if loops:
        yield from itertools.product(labels, repeat=q)
        return
    if q == 1:
        return
    # depth-first in lexicographic order, O(q) memory
    walk = [0] * q

    def extend(pos):
        prev = walk[pos - 1]
        for v in labels:
            if v == prev:
                continue
            if pos == q - 1 and v == walk[0]:
                continue
            walk[pos] = v
            if pos == q - 1:
                yield tuple(walk)
            else:
                yield from extend(pos + 1)

    for start in labels:
        walk[0] = start
        yield from extend(1)


def is_expectation_nonzero(walk: Sequence) -> bool:
    """True iff every undirected edge of the walk is traversed at least twice."""
    return min(edge_multiplicities(walk).values()) >= 2


@dataclass(frozen=True)
class LemmaReport:
    tuple_identity_ok: bool
    l1_ok: bool
    applicable: bool


def check_counting_lemmas(walk: Sequence, profile: MarkingProfile | None = None) -> LemmaReport:
    """Check the marked-vertex identities for one walk.

    * tuple identity: sum_k k n_k == (q + |O|) / 2, on every walk;
    * lower bound on sum_{k>=2} k n_k: >= 3o for even q (|O| = 2o) and
      >= 3o + 2 for odd q (|O| = 2o + 1), only on walks whose edges all
      have multiplicity >= 2.

    ``l1_ok`` is reported True when the bound is not applicable.
    """
    prof = profile if profile is not None else mark_walk(walk)
    q = prof.q
    n_odd = len(prof.odd_edges)
    tuple_ok = 2 * prof.weighted_marks == q + n_odd
    applicable = is_expectation_nonzero(walk)
    l1_ok = True
    if applicable:
        if q % 2 == 0:
            o = n_odd // 2
            l1_ok = prof.heavy_marks >= 3 * o
        else:
            o = (n_odd - 1) // 2
            l1_ok = prof.heavy_marks >= 3 * o + 2
    return LemmaReport(tuple_identity_ok=tuple_ok, l1_ok=l1_ok, applicable=applicable)


@dataclass
class EncodingSummary:
    walks: int = 0
    applicable: int = 0
    tuple_identity_violations: list = field(default_factory=list)
    l1_violations: list = field(default_factory=list)
    prefix_violations: list = field(default_factory=list)
    unmarked_vertex_violations: list = field(default_factory=list)
    edge_count_violations: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return (
            len(self.tuple_identity_violations)
            + len(self.l1_violations)
            + len(self.prefix_violations)
            + len(self.unmarked_vertex_violations)
            + len(self.edge_count_violations)
        )

    def merge(self, other: "EncodingSummary") -> "EncodingSummary":
        self.walks += other.walks
        self.applicable += other.applicable
        self.tuple_identity_violations += other.tuple_identity_violations
        self.l1_violations += other.l1_violations
        self.prefix_violations += other.prefix_violations
        self.unmarked_vertex_violations += other.unmarked_vertex_violations
        self.edge_count_violations += other.edge_count_violations
        return self


def verify_encoding(n: int, q: int, loops: bool, budget: int = DEFAULT_WALK_BUDGET) -> EncodingSummary:
    """Run every per-walk check over all closed walks of length ``q``."""
    summary = EncodingSummary()
    for walk in enumerate_closed_walks(n, q, loops, budget):
        prof = mark_walk(walk)
        report = check_counting_lemmas(walk, prof)
        summary.walks += 1
        summary.applicable += report.applicable
        if not report.tuple_identity_ok:
            summary.tuple_identity_violations.append(walk)
        if not report.l1_ok:
            summary.l1_violations.append(walk)
        height = 0
        for is_marked in prof.marked:
            height += 1 if is_marked else -1
            if height < 0:
                summary.prefix_violations.append(walk)
                break
        if any(c == 0 for v, c in prof.vertex_marks.items() if v != prof.start):
            summary.unmarked_vertex_violations.append(walk)
        if prof.distinct_edges < prof.marked_vertices - 1:
            summary.edge_count_violations.append(walk)
    return summary
