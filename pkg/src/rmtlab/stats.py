"""Normalizations, distances to N(0, 2) and concentration bounds.

Both limit laws have variance 2. Centering always uses the sample mean:
no closed form for E[tr(A^(2m))] or E[lambda_1] is available, and the
difference is invisible at the fluctuation scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import check_exact_ints, check_float_sample, check_int

__all__ = [
    "TARGET_VARIANCE",
    "NormalizedSample",
    "TailCheck",
    "TraceNormalizer",
    "Lambda1Normalizer",
    "trace_scale",
    "lambda1_scale",
    "normalize_traces",
    "normalize_lambda1",
    "normal02_cdf",
    "normal02_pdf",
    "ks_distance",
    "summary_moments",
    "gaussian_moment_target",
    "tail_bound",
    "tail_frequency",
    "tail_check",
    "expectation_window_check",
    "trace_variance_leading_term",
]

TARGET_VARIANCE = 2.0


@dataclass
class NormalizedSample:
    values: np.ndarray
    scale_used: float
    target_variance: float = TARGET_VARIANCE
    centering: str = "empirical_mean"
    degenerate: bool = False

    def __len__(self):
        return len(self.values)


@dataclass
class TailCheck:
    m: int
    t: float
    n: int
    p: float
    bound: float
    empirical_frequency: float
    replicates: int

    @property
    def slack(self) -> float:
        return 3.0 * math.sqrt(self.bound / self.replicates)

    @property
    def ok(self) -> bool:
        return self.empirical_frequency <= self.bound + self.slack


def trace_scale(n: int, p: float, m: int) -> float:
    """2m (np)^(2m-1) sqrt(p(1-p))."""
    return 2 * m * (n * p) ** (2 * m - 1) * math.sqrt(p * (1 - p))


def lambda1_scale(p: float) -> float:
    return math.sqrt(p * (1 - p))


def _check_open_p(p) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return p


class TraceNormalizer(TransformerMixin, BaseEstimator):
    """Center exact traces at their sample mean and divide by the CLT scale.

    ``fit`` stores the exact integer total; ``transform`` forms
    ``count * trace - total`` in integers before the single float division,
    so large traces lose no precision to cancellation.
    """

    def __init__(self, n=1000, p=0.1, m=2):
        self.n = n
        self.p = p
        self.m = m

    def fit(self, X, y=None):
        traces = check_exact_ints(X, name="traces", min_length=2)
        check_int(self.n, name="n", minimum=1)
        check_int(self.m, name="m", minimum=1)
        self.scale_ = trace_scale(self.n, _check_open_p(self.p), self.m)
        self.total_ = sum(traces)
        self.count_ = len(traces)
        self.degenerate_ = all(t == traces[0] for t in traces)
        return self

    def transform(self, X):
        if not hasattr(self, "total_"):
            raise NotFittedError("TraceNormalizer is not fitted yet")
        traces = check_exact_ints(X, name="traces")
        denom = self.count_ * self.scale_
        return np.array([(self.count_ * t - self.total_) / denom for t in traces], dtype=float)


class Lambda1Normalizer(TransformerMixin, BaseEstimator):
    """(lambda_1 - sample mean) / sqrt(p(1-p))."""

    def __init__(self, p=0.1):
        self.p = p

    def fit(self, X, y=None):
        values = check_float_sample(X, min_length=2)
        self.scale_ = lambda1_scale(_check_open_p(self.p))
        self.mean_ = float(np.mean(values))
        self.degenerate_ = bool(np.all(values == values[0]))
        return self

    def transform(self, X):
        if not hasattr(self, "mean_"):
            raise NotFittedError("Lambda1Normalizer is not fitted yet")
        values = check_float_sample(X)
        if self.degenerate_:
            return np.where(values == self.mean_, 0.0, (values - self.mean_) / self.scale_)
        return (values - self.mean_) / self.scale_


def normalize_traces(traces, n: int, p: float, m: int) -> NormalizedSample:
    est = TraceNormalizer(n=n, p=p, m=m)
    values = est.fit_transform(traces)
    return NormalizedSample(values, est.scale_, degenerate=est.degenerate_)


def normalize_lambda1(values, p: float) -> NormalizedSample:
    est = Lambda1Normalizer(p=p)
    z = est.fit_transform(values)
    if est.degenerate_:
        z = np.zeros_like(z)
    return NormalizedSample(z, est.scale_, degenerate=est.degenerate_)


def normal02_cdf(x):
    return 0.5 * (1.0 + erf(np.asarray(x, dtype=float) / 2.0))


def normal02_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / 4.0) / math.sqrt(4.0 * math.pi)


def ks_distance(sample) -> float:
    """Kolmogorov-Smirnov sup distance between the sample and N(0, 2)."""
    values = sample.values if isinstance(sample, NormalizedSample) else sample
    x = np.sort(check_float_sample(values, name="sample"))
    r = len(x)
    cdf = normal02_cdf(x)
    upper = np.arange(1, r + 1) / r - cdf
    lower = cdf - np.arange(0, r) / r
    return float(max(upper.max(), lower.max()))


def summary_moments(sample) -> dict:
    """Sample mean, variance (ddof=1), and third/fourth central moments.

    Limits under N(0, 2): mean 0, variance 2, third 0, fourth 12.
    """
    values = sample.values if isinstance(sample, NormalizedSample) else sample
    x = check_float_sample(values, name="sample", min_length=4)
    centered = x - x.mean()
    return {
        "mean": float(x.mean()),
        "variance": float(np.var(x, ddof=1)),
        "third": float(np.mean(centered**3)),
        "fourth": float(np.mean(centered**4)),
    }


def gaussian_moment_target(order: int, variance: float = TARGET_VARIANCE) -> float:
    """E[Z^order] for Z ~ N(0, variance): 0 for odd, variance^(l/2)(l-1)!! for even."""
    order = check_int(order, name="order", minimum=1)
    if order % 2:
        return 0.0
    return variance ** (order // 2) * math.prod(range(order - 1, 0, -2))


def tail_bound(n: int, p: float, m: int, t: float) -> float:
    """4 * 16^m * n / ((np)^m * t^(2m)); not clipped at 1."""
    m = check_int(m, name="m", minimum=1)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if math.isinf(t):
        return 0.0
    return 4.0 * 16.0**m * n / ((n * p) ** m * t ** (2 * m))


def tail_frequency(lambda1_values, t: float) -> float:
    """Fraction of replicates with |lambda_1 / mean - 1| >= t."""
    x = check_float_sample(lambda1_values, name="lambda1_values")
    return float(np.mean(np.abs(x / x.mean() - 1.0) >= t))


def tail_check(lambda1_values, n: int, p: float, m: int, t: float) -> TailCheck:
    x = check_float_sample(lambda1_values, name="lambda1_values")
    return TailCheck(
        m=m, t=t, n=n, p=p,
        bound=tail_bound(n, p, m, t),
        empirical_frequency=tail_frequency(x, t),
        replicates=len(x),
    )


def expectation_window_check(lambda1_mean: float, n: int, p: float) -> bool:
    """np - 3 <= mean <= np + 2; only meaningful when np >= 30."""
    np_ = n * p
    if np_ < 30:
        raise ValueError(f"window check needs np >= 30, got {np_:.4g}")
    return bool(np_ - 3.0 <= lambda1_mean <= np_ + 2.0)


def trace_variance_leading_term(n: int, p: float, m: int) -> float:
    """2 (2m)^2 (np)^(4m-2) p(1-p): leading order of Var tr(A^(2m))."""
    return 2.0 * (2 * m) ** 2 * (n * p) ** (4 * m - 2) * p * (1 - p)
