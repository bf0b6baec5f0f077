import numpy as np
import pytest

from sublqt import matrixcore as mc
from sublqt.errors import NetworkError
from sublqt.graph import NetworkSpec, cycle_graph, gamma_spectrum, laplacian, path_graph

from oracles import random_connected_adjacency, random_pinning

CYCLE5_LAPLACIAN = np.array(
    [
        [2, -1, 0, 0, -1],
        [-1, 2, -1, 0, 0],
        [0, -1, 2, -1, 0],
        [0, 0, -1, 2, -1],
        [-1, 0, 0, -1, 2],
    ],
    dtype=float,
)


def test_two_node_path():
    spec = NetworkSpec(path_graph(2), [1.0, 0.0])
    np.testing.assert_array_equal(laplacian(spec), [[1, -1], [-1, 1]])


def test_five_cycle_laplacian_matches_reference():
    spec = NetworkSpec.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)], [0, 1, 0, 0, 0])
    np.testing.assert_array_equal(laplacian(spec), CYCLE5_LAPLACIAN)
    np.testing.assert_array_equal(cycle_graph(5), spec.adjacency)


def test_random_connected_laplacian(rng):
    for _ in range(20):
        n = int(rng.integers(2, 9))
        spec = NetworkSpec(random_connected_adjacency(rng, n), random_pinning(rng, n))
        lap = laplacian(spec)
        assert np.max(np.abs(lap @ np.ones(n))) <= 1e-12
        w = mc.sym_eigen(lap).eigenvalues
        assert abs(w[0]) <= 1e-10
        assert w[1] > 1e-8


def test_example_spectrum(example_spectrum):
    assert example_spectrum.lambda_min == pytest.approx(0.1392, abs=1e-3)
    assert example_spectrum.lambda_max == pytest.approx(4.1149, abs=1e-3)


def test_single_follower():
    sp = gamma_spectrum(NetworkSpec(np.zeros((1, 1)), [3.0]))
    np.testing.assert_array_equal(sp.gamma, [[3.0]])
    assert sp.lambda_min == sp.lambda_max == 3.0


def test_path3_matches_cubic_roots():
    sp = gamma_spectrum(NetworkSpec(path_graph(3), [1.0, 0.0, 0.0]))
    # det(tI - Gamma) = t^3 - 5t^2 + 6t - 1 from trace, principal minors, determinant.
    roots = np.sort(np.roots([1.0, -5.0, 6.0, -1.0]).real)
    np.testing.assert_allclose(sp.all_eigenvalues, roots, atol=1e-12)


def test_gamma_positive_definite_and_diagonalized(rng):
    for _ in range(30):
        n = int(rng.integers(1, 10))
        spec = NetworkSpec(random_connected_adjacency(rng, n), random_pinning(rng, n))
        sp = gamma_spectrum(spec)
        assert np.all(sp.all_eigenvalues > 0)
        u = sp.diagonalizer
        assert mc.max_norm(u.T @ u - np.eye(n)) <= 1e-9
        d = u.T @ sp.gamma @ u
        assert mc.max_norm(d - np.diag(sp.all_eigenvalues)) <= 1e-8


@pytest.mark.parametrize(
    "adj, gains, match",
    [
        (np.array([[0, 1], [1, 0]]), [0.0, 0.0], "pinned"),
        (np.array([[0, 1], [0, 0]]), [1.0, 0.0], "symmetric"),
        (np.array([[1, 1], [1, 0]]), [1.0, 0.0], "diagonal"),
        (np.array([[0, 2], [2, 0]]), [1.0, 0.0], "0 or 1"),
        (np.array([[0, 1], [1, 0]]), [1.0, -1.0], "nonnegative"),
        (np.array([[0, 1], [1, 0]]), [1.0], "length"),
        (np.zeros((3, 3)), [1.0, 1.0, 1.0], "connected"),
    ],
)
def test_invalid_networks(adj, gains, match):
    with pytest.raises(NetworkError, match=match):
        NetworkSpec(adj, gains)


def test_from_edges_rejects_bad_labels():
    with pytest.raises(NetworkError, match="outside"):
        NetworkSpec.from_edges(3, [(1, 4)], [1, 0, 0])
    with pytest.raises(NetworkError, match="self-loop"):
        NetworkSpec.from_edges(3, [(2, 2)], [1, 0, 0])


def test_edges_round_trip():
    edges = [(1, 2), (1, 5), (2, 3), (3, 4), (4, 5)]
    spec = NetworkSpec.from_edges(5, edges, [0, 1, 0, 0, 0])
    assert spec.edges() == edges


def test_spec_is_immutable():
    spec = NetworkSpec(path_graph(2), [1.0, 0.0])
    with pytest.raises(ValueError):
        spec.adjacency[0, 1] = 0.0
