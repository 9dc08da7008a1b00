"""Exact and Monte Carlo checks of trace and top-eigenvalue CLTs for
sparse Erdos-Renyi adjacency matrices."""

from .combinatorics import binomial, catalan, catalan_convolution, sigma, sigma_bruteforce
from .experiment import ExperimentConfig, parse_config, run_experiment
from .moments import centered_moment, moment_bound_holds, raw_moment
from .oracles import MatrixKind, config_moments, oracle_crosscheck, walk_expectation
from .sampling import AdjacencyMatrix, StreamSeed, sample_adjacency
from .spectral import full_spectrum, lambda1, spectrum_crosscheck, trace_power_int
from .stats import (
    Lambda1Normalizer,
    TraceNormalizer,
    ks_distance,
    normalize_lambda1,
    normalize_traces,
    summary_moments,
    tail_bound,
)
from .walks import check_counting_lemmas, enumerate_closed_walks, is_expectation_nonzero, mark_walk

__version__ = "0.1.0"
