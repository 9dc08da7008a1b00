import numpy as np
import pytest

from rmtlab.sampling import AdjacencyMatrix, StreamSeed, sample_adjacency, slot_count
from rmtlab.spectral import lambda1


def test_empty_graph():
    adj = sample_adjacency(30, 0.0, True, StreamSeed(1))
    assert adj.edge_count == 0
    assert lambda1(adj) == 0.0


def test_full_graph_with_loops():
    n = 12
    adj = sample_adjacency(n, 1.0, True, StreamSeed(1))
    assert np.array_equal(adj.to_dense(), np.ones((n, n), dtype=np.int64))
    assert adj.edge_count == slot_count(n, True)
    assert lambda1(adj) == pytest.approx(n, rel=1e-10)


def test_full_simple_graph():
    n = 9
    dense = sample_adjacency(n, 1.0, False, StreamSeed(3)).to_dense()
    assert np.array_equal(dense, np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))


def test_geometric_path_edge_count():
    n, p = 10_000, 1e-3
    adj = sample_adjacency(n, p, False, StreamSeed(2024))
    mean = n * (n - 1) / 2 * p
    sd = np.sqrt(mean * (1 - p))
    assert abs(adj.edge_count - mean) <= 6 * sd


@pytest.mark.parametrize("p", [0.004, 0.3])
@pytest.mark.parametrize("loops", [True, False])
def test_slot_marginals(p, loops):
    n, reps = 6, 4000
    counts = np.zeros((n, n))
    for r in range(reps):
        counts += sample_adjacency(n, p, loops, StreamSeed(99, r)).to_dense()
    freq = counts / reps
    se = np.sqrt(p * (1 - p) / reps)
    iu = np.triu_indices(n, 0 if loops else 1)
    assert np.all(np.abs(freq[iu] - p) <= 5 * se)
    if not loops:
        assert np.all(np.diag(counts) == 0)


@pytest.mark.parametrize("p", [0.005, 0.05, 0.5])
def test_structure_invariants(p):
    adj = sample_adjacency(200, p, True, StreamSeed(5, 7))
    dense = adj.to_dense()
    assert np.array_equal(dense, dense.T)
    for v in range(adj.n):
        nbrs = adj.neighbors(v)
        assert np.all(np.diff(nbrs) > 0)
    assert adj.edge_count == int(np.triu(dense).sum())


def test_simple_graph_has_no_loops():
    adj = sample_adjacency(300, 0.2, False, StreamSeed(8))
    assert not np.any(np.diag(adj.to_dense()))


def test_determinism_and_stream_separation():
    a = sample_adjacency(500, 0.02, True, StreamSeed(42, 3))
    b = sample_adjacency(500, 0.02, True, StreamSeed(42, 3))
    c = sample_adjacency(500, 0.02, True, StreamSeed(42, 4))
    d = sample_adjacency(500, 0.02, True, StreamSeed(43, 3))
    assert a == b
    assert a != c and a != d


def test_seed_key_is_injective_on_components():
    assert StreamSeed(1, 0).key != StreamSeed(0, 1).key
    assert StreamSeed(2**64 - 1, 0).key != StreamSeed(0, 1).key
    with pytest.raises(ValueError):
        StreamSeed(2**64)


def test_from_dense_roundtrip():
    dense = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 0]])
    adj = AdjacencyMatrix.from_dense(dense)
    assert adj.loops and adj.edge_count == 3
    assert np.array_equal(adj.to_dense(), dense)
    assert np.array_equal(adj.to_sparse().toarray(), dense)


def test_from_dense_rejects_bad_input():
    with pytest.raises(ValueError):
        AdjacencyMatrix.from_dense(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        AdjacencyMatrix.from_dense(np.array([[1, 0], [0, 0]]), loops=False)
