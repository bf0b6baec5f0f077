import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sublqt import matrixcore as mc
from sublqt.errors import DimensionError, ResonantSpectrumError, SymmetryError

from oracles import charpoly_eigenvalues, lyapunov_quadrature, random_hurwitz


def _reconstruction_error(m):
    w, v = mc.sym_eigen(m)
    return mc.max_norm(v @ np.diag(w) @ v.T - m)


class TestSymEigen:
    def test_diagonal_input_gives_sorted_permutation(self):
        w, v = mc.sym_eigen(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_array_equal(w, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(np.abs(v), [[0, 0, 1], [1, 0, 0], [0, 1, 0]])

    def test_matches_charpoly_bisection(self, rng):
        m = rng.normal(size=(5, 5))
        m = m + m.T
        expected = charpoly_eigenvalues(m)
        assert expected.size == 5
        np.testing.assert_allclose(mc.sym_eigen(m).eigenvalues, expected, atol=1e-9)

    @pytest.mark.parametrize("n", [1, 2, 7, 18, 30])
    def test_invariants_on_random_symmetric(self, rng, n):
        m = rng.normal(size=(n, n))
        m = m + m.T
        w, v = mc.sym_eigen(m)
        assert np.all(np.diff(w) >= 0)
        assert mc.max_norm(v.T @ v - np.eye(n)) <= 1e-9
        assert mc.max_norm(m @ v - v * w) <= 1e-8 * (1 + mc.max_norm(m))
        assert _reconstruction_error(m) <= 1e-8 * (1 + mc.max_norm(m))

    def test_repeated_eigenvalues(self):
        # Cycle Laplacian has double eigenvalues.
        adj = np.roll(np.eye(6), 1, axis=1)
        adj = adj + adj.T
        lap = np.diag(adj.sum(1)) - adj
        w, v = mc.sym_eigen(lap)
        np.testing.assert_allclose(w, np.sort(2 - 2 * np.cos(2 * np.pi * np.arange(6) / 6)), atol=1e-12)
        assert mc.max_norm(v.T @ v - np.eye(6)) <= 1e-9

    def test_zero_matrix(self):
        w, v = mc.sym_eigen(np.zeros((3, 3)))
        np.testing.assert_array_equal(w, 0.0)
        np.testing.assert_array_equal(v, np.eye(3))

    def test_rejects_asymmetric_and_non_square(self):
        with pytest.raises(SymmetryError):
            mc.sym_eigen([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(DimensionError):
            mc.sym_eigen(np.ones((2, 3)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_reconstruction_property(self, n, seed):
        m = np.random.default_rng(seed).normal(size=(n, n)) * 10
        m = m + m.T
        assert _reconstruction_error(m) <= 1e-8 * (1 + mc.max_norm(m))


class TestKron:
    def test_identity_factor_is_block_diagonal(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = mc.kron(np.eye(2), m)
        np.testing.assert_array_equal(out[:2, :2], m)
        np.testing.assert_array_equal(out[2:, 2:], m)
        np.testing.assert_array_equal(out[:2, 2:], 0)

    def test_ones_vector_stacks_copies(self):
        x = np.array([[0.3], [-0.5]])
        np.testing.assert_array_equal(mc.kron(np.ones((5, 1)), x).ravel(), np.tile([0.3, -0.5], 5))

    def test_mixed_product_identity(self, rng):
        a1, b1, a2, b2 = (rng.normal(size=(2, 2)) for _ in range(4))
        lhs = mc.kron(a1, b1) @ mc.kron(a2, b2)
        # Direct multiplication oracle, entry by entry.
        rhs = np.empty((4, 4))
        ab_a, ab_b = a1 @ a2, b1 @ b2
        for i in range(2):
            for j in range(2):
                rhs[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = ab_a[i, j] * ab_b
        assert mc.max_norm(lhs - rhs) <= 1e-12

    def test_shape(self):
        assert mc.kron(np.ones((2, 3)), np.ones((4, 5))).shape == (8, 15)


class TestLyapunov:
    def test_scalar(self):
        np.testing.assert_allclose(mc.solve_lyapunov([[-1.0]], [[2.0]]), [[1.0]])

    def test_companion_matches_quadrature(self):
        a = np.array([[0.0, 1.0], [-2.0, -3.0]])
        x = mc.solve_lyapunov(a, np.eye(2))
        assert mc.max_norm(x - lyapunov_quadrature(a, np.eye(2))) <= 1e-6

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_random_hurwitz_matches_quadrature(self, rng, n):
        a = random_hurwitz(rng, n)
        q = rng.normal(size=(n, n))
        q = q @ q.T
        x = mc.solve_lyapunov(a, q)
        assert mc.max_norm(x - x.T) <= 1e-10
        assert mc.max_norm(a.T @ x + x @ a + q) <= 1e-9 * (1 + mc.max_norm(q))
        ref = lyapunov_quadrature(a, q, dt=2e-3)
        assert mc.max_norm(x - ref) <= 1e-6 * max(1.0, mc.max_norm(ref))

    def test_resonant_spectrum_raises(self):
        with pytest.raises(ResonantSpectrumError):
            mc.solve_lyapunov([[0.0, 1.0], [-1.0, 0.0]], np.eye(2))
        with pytest.raises(ResonantSpectrumError):
            mc.solve_lyapunov(np.diag([1.0, -1.0]), np.eye(2))

    def test_unstable_but_nonresonant_solves(self):
        x = mc.solve_lyapunov([[1.0]], [[1.0]])
        np.testing.assert_allclose(x, [[-0.5]])


class TestDefiniteness:
    def test_identity(self):
        assert mc.is_positive_definite(np.eye(3))

    def test_cycle_laplacian_is_singular(self):
        adj = np.roll(np.eye(5), 1, axis=1)
        adj = adj + adj.T
        assert not mc.is_positive_definite(np.diag(adj.sum(1)) - adj)

    def test_rejects_asymmetric(self):
        with pytest.raises(SymmetryError):
            mc.is_positive_definite([[1.0, 1.0], [0.0, 1.0]])

    def test_agrees_with_min_eigenvalue(self, rng):
        checked = 0
        for _ in range(200):
            n = int(rng.integers(1, 8))
            m = rng.normal(size=(n, n))
            m = m + m.T + rng.uniform(-2, 4) * np.eye(n)
            lam = np.linalg.eigvalsh(m)[0]
            if abs(lam) < 1e-10 * (1 + mc.max_norm(m)):
                continue
            assert mc.is_positive_definite(m) == (mc.min_eigenvalue(m) > 0)
            checked += 1
        assert checked > 150


class TestHurwitz:
    def test_scalar_stable(self):
        assert mc.is_hurwitz([[-1.0]])

    def test_marginal_oscillator_is_not_hurwitz(self):
        assert not mc.is_hurwitz([[0.0, 1.0], [-1.0, 0.0]])

    def test_unstable(self):
        assert not mc.is_hurwitz([[1.0]])
        assert not mc.is_hurwitz([[0.1, 1.0], [-1.0, 0.1]])

    def test_agrees_with_eigenvalues(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 5))
            a = rng.normal(size=(n, n)) + rng.uniform(-2, 1) * np.eye(n)
            abscissa = np.max(np.linalg.eigvals(a).real)
            if abs(abscissa) < 1e-3:
                continue
            assert mc.is_hurwitz(a) == (abscissa < 0)
