import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import norm
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from rmtlab.stats import (
    Lambda1Normalizer,
    NormalizedSample,
    TailCheck,
    TraceNormalizer,
    expectation_window_check,
    gaussian_moment_target,
    ks_distance,
    lambda1_scale,
    normalize_lambda1,
    normalize_traces,
    summary_moments,
    tail_bound,
    tail_check,
    trace_scale,
    trace_variance_leading_term,
)


def test_trace_scale_example():
    sample = normalize_traces([10**6, 10**6 + 2400], n=100, p=0.1, m=2)
    assert sample.scale_used == pytest.approx(1200.0, rel=1e-12)
    assert trace_scale(100, 0.1, 2) == pytest.approx(1200.0, rel=1e-12)
    assert np.allclose(sample.values, [-1.0, 1.0])


def test_equal_traces_are_degenerate():
    sample = normalize_traces([5, 5], 100, 0.1, 2)
    assert sample.degenerate
    assert np.array_equal(sample.values, [0.0, 0.0])


def test_symmetric_offsets():
    big = 10**40
    d = 3_600
    sample = normalize_traces([big - d, big + d], 100, 0.1, 2)
    assert np.allclose(sample.values, [-d / 1200, d / 1200], rtol=1e-12)


@given(
    st.lists(st.integers(-10**30, 10**30), min_size=2, max_size=30),
    st.integers(-10**50, 10**50),
)
def test_trace_normalization_shift_invariant(traces, shift):
    a = normalize_traces(traces, 50, 0.2, 2).values
    b = normalize_traces([t + shift for t in traces], 50, 0.2, 2).values
    assert np.array_equal(a, b)


@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=30), st.integers(1, 50))
def test_trace_normalization_scale_equivariant(traces, k):
    n, p, m = 50, 0.2, 2
    scale = trace_scale(n, p, m)
    a = normalize_traces(traces, n, p, m).values
    # multiplying traces by the scale itself is not integral; use integer k
    b = normalize_traces([k * t for t in traces], n, p, m).values
    assert np.allclose(b, k * a, rtol=1e-12, atol=1e-12 * scale)


def test_trace_normalizer_rejects_floats():
    with pytest.raises(TypeError):
        normalize_traces([1.5, 2.0], 10, 0.1, 1)
    with pytest.raises(ValueError):
        normalize_traces([3], 10, 0.1, 1)


def test_lambda1_examples():
    assert lambda1_scale(0.5) == 0.5
    assert lambda1_scale(0.0316) == pytest.approx(0.17493, abs=5e-6)
    sample = normalize_lambda1([3.0, 3.0, 3.0], 0.5)
    assert sample.degenerate and np.array_equal(sample.values, [0, 0, 0])
    assert np.allclose(normalize_lambda1([1.0, 2.0], 0.5).values, [-1.0, 1.0])


def test_estimators_follow_sklearn_protocol():
    est = TraceNormalizer(n=100, p=0.1, m=2)
    assert est.get_params() == {"n": 100, "p": 0.1, "m": 2}
    est.set_params(m=3)
    assert clone(est).get_params()["m"] == 3
    with pytest.raises(NotFittedError):
        est.transform([1, 2])
    with pytest.raises(NotFittedError):
        Lambda1Normalizer(p=0.3).transform([1.0])
    fitted = Lambda1Normalizer(p=0.5).fit([1.0, 3.0])
    assert np.allclose(fitted.transform([2.0, 4.0]), [0.0, 4.0])


def test_ks_single_point():
    assert ks_distance(NormalizedSample(np.array([0.0]), 1.0)) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("r", [10, 400, 1000])
def test_ks_exact_quantiles(r):
    q = norm.ppf((np.arange(1, r + 1) - 0.5) / r, scale=math.sqrt(2))
    assert ks_distance(q) == pytest.approx(0.5 / r, abs=1e-12)


def test_ks_gaussian_sample():
    x = np.random.default_rng(1234).normal(scale=math.sqrt(2), size=400)
    assert ks_distance(x) <= 0.08


@settings(max_examples=50)
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=40), st.randoms())
def test_ks_permutation_invariant(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert ks_distance(values) == ks_distance(shuffled)


def test_summary_moments_and_targets():
    x = np.random.default_rng(7).normal(scale=math.sqrt(2), size=200_000)
    mom = summary_moments(x)
    assert mom["variance"] == pytest.approx(2.0, rel=0.02)
    assert mom["fourth"] == pytest.approx(12.0, rel=0.05)
    assert abs(mom["third"]) < 0.1
    assert gaussian_moment_target(2) == 2
    assert gaussian_moment_target(4) == 12
    assert gaussian_moment_target(3) == 0
    assert gaussian_moment_target(6) == 8 * 15


def test_tail_bound_examples():
    assert tail_bound(1000, 0.1, 6, 1.0) == pytest.approx(4 * 16**6 * 1000 / 100**6, rel=1e-12)
    assert tail_bound(1000, 0.1, 6, 1.0) == pytest.approx(0.0671, abs=1e-4)
    assert tail_bound(1000, 0.1, 6, math.inf) == 0.0
    assert tail_bound(10, 0.5, 1, 1.0) == pytest.approx(128.0)


def test_tail_bound_monotone():
    ts = np.linspace(0.2, 3, 30)
    vals = [tail_bound(1000, 0.05, 4, t) for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    ps = np.linspace(0.01, 0.5, 30)
    vals = [tail_bound(1000, p, 4, 1.0) for p in ps]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_tail_check_counts():
    values = np.array([10.0] * 98 + [0.0, 30.0])
    check = tail_check(values, 1000, 0.1, 6, 1.0)
    assert isinstance(check, TailCheck)
    assert check.empirical_frequency == pytest.approx(0.02)
    assert check.replicates == 100


def test_expectation_window():
    np_ = 31.6
    n = 1000
    assert expectation_window_check(32.6, n, np_ / n)
    assert not expectation_window_check(np_ + 5, n, np_ / n)
    assert not expectation_window_check(np_ - 10, n, np_ / n)
    with pytest.raises(ValueError):
        expectation_window_check(5.0, 100, 0.1)


def test_variance_leading_term():
    assert trace_variance_leading_term(100, 0.1, 2) == pytest.approx(2 * 16 * 10**6 * 0.09)
