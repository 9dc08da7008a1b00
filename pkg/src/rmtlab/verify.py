"""Exhaustive verification suites behind the ``verify-*`` subcommands."""

from __future__ import annotations

from fractions import Fraction

from .combinatorics import (
    catalan,
    catalan_convolution,
    convolution_identity_holds,
    sigma,
    sigma_bruteforce,
)
from .oracles import config_moments, walk_expectation
from .walks import EncodingSummary, verify_encoding

__all__ = ["verify_combinatorics", "verify_encoding_range", "verify_oracles"]


def verify_combinatorics(max_length: int = 20, max_m: int = 10) -> dict:
    """Ballot counts vs enumeration, the last-step recurrence, the segre
    recurrence, and which (m, s) satisfy conv(m, s) == C_{m+s-1}."""
    grid = [(m, n) for m in range(max_length + 1) for n in range(max_length + 1)
            if 0 < m + 2 * n <= max_length]
    sigma_mismatch = [(m, n) for m, n in grid if sigma(m, n) != sigma_bruteforce(m, n)]
    recurrence_fail = [
        (m, n) for m, n in grid
        if m >= 1 and n >= 1 and sigma(m, n) != sigma(m + 1, n - 1) + sigma(m - 1, n)
    ]
    catalan_fail = [n for n in range(1, max_length // 2 + 1) if sigma(0, n) != catalan(n)]
    segre_fail = [m for m in range(max_m + 1) if catalan_convolution(m, 2, 0) != catalan(m + 1)]
    identity = {
        f"{m},{s}": {
            "convolution": catalan_convolution(m, s, 0),
            "catalan": catalan(m + s - 1),
            "holds": convolution_identity_holds(m, s),
        }
        for s in range(1, 5)
        for m in range(0, 6)
    }
    passed = not (sigma_mismatch or recurrence_fail or catalan_fail or segre_fail)
    return {
        "passed": passed,
        "sigma_checked": len(grid),
        "sigma_mismatches": sigma_mismatch,
        "recurrence_failures": recurrence_fail,
        "catalan_failures": catalan_fail,
        "segre_failures": segre_fail,
        "convolution_identity": identity,
        "convolution_identity_holds_for_s_le_2": all(
            v["holds"] for k, v in identity.items() if int(k.split(",")[1]) <= 2
        ),
    }


def verify_encoding_range(n: int, q: int, loops) -> dict:
    """Check all walks on n labels of every length 1..q.

    ``loops`` may be True, False or None (both settings).
    """
    settings = (True, False) if loops is None else (bool(loops),)
    per_setting = {}
    total = EncodingSummary()
    for setting in settings:
        summary = EncodingSummary()
        for length in range(1, q + 1):
            summary.merge(verify_encoding(n, length, setting))
        per_setting["loops" if setting else "no_loops"] = _encoding_dict(summary)
        total.merge(summary)
    out = _encoding_dict(total)
    out["settings"] = per_setting
    return out


def _encoding_dict(summary: EncodingSummary) -> dict:
    return {
        "walks": summary.walks,
        "applicable": summary.applicable,
        "violations": summary.violations,
        "tuple_identity_violations": len(summary.tuple_identity_violations),
        "l1_violations": len(summary.l1_violations),
        "prefix_violations": len(summary.prefix_violations),
        "unmarked_vertex_violations": len(summary.unmarked_vertex_violations),
        "edge_count_violations": len(summary.edge_count_violations),
        "examples": [list(w) for w in (
            summary.tuple_identity_violations + summary.l1_violations
            + summary.prefix_violations + summary.unmarked_vertex_violations
            + summary.edge_count_violations
        )[:5]],
    }


def verify_oracles(n: int, q_max: int, p, loops: bool) -> dict:
    """Configuration-oracle table plus walk-oracle agreement for each row."""
    p = Fraction(p)
    rows = []
    agree = True
    for result in config_moments(n, q_max, p, loops):
        walk = walk_expectation(n, result.q, p, loops, result.kind)
        match = walk == result.expectation
        agree &= match
        rows.append({
            "q": result.q,
            "kind": result.kind.value,
            "expectation": result.expectation,
            "variance": result.variance,
            "walk_expectation": walk,
            "match": match,
        })
    return {"passed": agree, "rows": rows, "n": n, "q_max": q_max, "p": p, "loops": loops}
