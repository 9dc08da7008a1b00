from fractions import Fraction as F

import numpy as np
import pytest

from rmtlab.combinatorics import catalan
from rmtlab.moments import centered_moment
from rmtlab.oracles import (
    MatrixKind,
    config_moments,
    oracle_crosscheck,
    simple_cycle_lower_bound,
    simple_cycle_lower_bound_check,
    walk_expectation,
)
from rmtlab.sampling import StreamSeed, sample_adjacency
from rmtlab.spectral import trace_power_int
from rmtlab.walks import BudgetExceeded

P = F(1, 3)


def _lookup(results, q, kind):
    (r,) = [r for r in results if r.q == q and r.kind is kind]
    return r


def test_walk_expectation_examples():
    assert walk_expectation(1, 2, P, True, "raw") == P
    assert walk_expectation(2, 2, P, True, "raw") == 4 * P
    assert walk_expectation(2, 2, P, True, "centered") == 4 * P * (1 - P)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_second_centered_moment_is_n_squared_variance(n):
    assert walk_expectation(n, 2, P, True, MatrixKind.CENTERED) == n * n * P * (1 - P)


def test_config_moments_two_vertices():
    p = F(1, 5)
    res = config_moments(2, 3, p, loops=False)
    r = _lookup(res, 2, MatrixKind.RAW)
    assert r.expectation == 2 * p
    assert r.variance == 4 * p * (1 - p)


def test_config_moments_single_loop_centered():
    p = F(1, 4)
    r = _lookup(config_moments(1, 3, p, loops=True), 3, MatrixKind.CENTERED)
    assert r.expectation == centered_moment(3, p)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("loops", [True, False])
def test_centered_first_power_vanishes(n, loops):
    r = _lookup(config_moments(n, 1, F(2, 7), loops), 1, MatrixKind.CENTERED)
    assert r.expectation == 0


@pytest.mark.parametrize("n,q,p,loops", [(2, 2, F(1, 3), True), (3, 4, F(1, 4), False), (1, 5, F(2, 5), True)])
def test_crosscheck_examples(n, q, p, loops):
    assert oracle_crosscheck(n, q, p, loops)


def test_crosscheck_full_grid():
    for n in range(1, 5):
        for p in (F(1, 10), F(1, 4), F(1, 2)):
            for loops in (True, False):
                for r in config_moments(n, 6, p, loops):
                    assert walk_expectation(n, r.q, p, loops, r.kind) == r.expectation
                    assert r.variance >= 0


def test_config_budget():
    with pytest.raises(BudgetExceeded):
        config_moments(6, 2, F(1, 2), loops=True)


@pytest.mark.parametrize("n,m,p", [(4, 1, F(1, 4)), (5, 2, F(1, 3)), (3, 2, F(1, 2))])
def test_simple_cycle_lower_bound_examples(n, m, p):
    assert simple_cycle_lower_bound_check(n, m, p)


def test_simple_cycle_lower_bound_m1_value():
    p = F(1, 4)
    assert simple_cycle_lower_bound(4, 1, p) == catalan(1) * p * (1 - p) * 4 * 3


def test_lower_bound_preconditions():
    with pytest.raises(ValueError):
        simple_cycle_lower_bound_check(2, 2, F(1, 4))
    with pytest.raises(ValueError):
        simple_cycle_lower_bound_check(4, 1, F(3, 4))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2])
def test_odd_powers_cauchy_schwarz(n, m):
    p = F(1, 4)
    res = config_moments(n, 2 * m + 2, p, loops=True)
    odd = float(_lookup(res, 2 * m + 1, MatrixKind.CENTERED).expectation)
    hi = float(_lookup(res, 2 * m + 2, MatrixKind.CENTERED).expectation)
    lo = float(_lookup(res, 2 * m, MatrixKind.CENTERED).expectation)
    assert abs(odd) <= np.sqrt(hi) * np.sqrt(lo) + 1e-12


def test_monte_carlo_mean_matches_oracle():
    n, m, p, reps = 4, 2, F(3, 10), 100_000
    exact = float(walk_expectation(n, 2 * m, p, True, MatrixKind.RAW))
    r = _lookup(config_moments(n, 2 * m, p, True), 2 * m, MatrixKind.RAW)
    traces = np.array(
        [trace_power_int(sample_adjacency(n, float(p), True, StreamSeed(11, i)), m) for i in range(reps)],
        dtype=float,
    )
    se = np.sqrt(float(r.variance) / reps)
    assert abs(traces.mean() - exact) <= 5 * se
