"""Dense eigenvalue and linear-solve contracts."""

import numpy as np
import pytest

from gaitlab.errors import SingularMatrix
from gaitlab.linalg import eigenvalues, solve_dense


def spectral_residuals(a, eigs):
    # sigma_min(A - lambda I) bounds ||A v - lambda v|| for the best unit v
    return [np.linalg.svd(a - lam * np.eye(a.shape[0]), compute_uv=False)[-1] for lam in eigs]


class TestEigenvalues:
    def test_identity(self):
        eigs = eigenvalues(np.eye(3))
        np.testing.assert_allclose(sorted(eigs.real), [1.0, 1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(eigs.imag, 0.0, atol=1e-12)

    def test_diagonal(self):
        eigs = eigenvalues(np.diag([2.0, -0.5, 0.0]))
        np.testing.assert_allclose(sorted(eigs.real), [-0.5, 0.0, 2.0], atol=1e-12)

    def test_companion_cube_roots_of_unity(self):
        companion = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        eigs = sorted(eigenvalues(companion), key=lambda z: (round(z.real, 9), z.imag))
        expected = sorted(
            [np.exp(2j * np.pi * k / 3) for k in range(3)], key=lambda z: (round(z.real, 9), z.imag)
        )
        for got, want in zip(eigs, expected):
            assert abs(got - want) < 1e-10

    def test_residual_bound_on_random_matrices(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = rng.integers(2, 10)
            a = rng.standard_normal((n, n))
            eigs = eigenvalues(a)
            bound = 1e-8 * np.linalg.norm(a)
            assert max(spectral_residuals(a, eigs)) <= bound

    def test_conjugate_closure(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((5, 5))
        eigs = eigenvalues(a)
        conj_sorted = np.sort_complex(np.conj(eigs))
        np.testing.assert_allclose(np.sort_complex(eigs), conj_sorted, atol=1e-9)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            eigenvalues(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestSolveDense:
    def test_identity(self):
        b = np.array([3.0, -1.0, 2.0])
        np.testing.assert_array_equal(solve_dense(np.eye(3), b), b)

    def test_diagonal_two_by_two(self):
        x = solve_dense(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 8.0]))
        np.testing.assert_allclose(x, [1.0, 2.0], atol=1e-14)

    def test_random_nine_by_nine_multiply_back(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a = rng.standard_normal((9, 9))
            b = rng.standard_normal(9)
            x = solve_dense(a, b)
            assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(a) * np.linalg.norm(x)

    def test_singular_matrix_raises(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(SingularMatrix):
            solve_dense(a, np.array([1.0, 1.0]))

    def test_near_singular_raises(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-16]])
        with pytest.raises(SingularMatrix):
            solve_dense(a, np.array([1.0, 2.0]))
