"""
해석적 고유구조 (큐브 기저, 확장 라플라시안, 치환 그래프 고유기저, 곱 그래프 분해) 테스트
"""
import unittest
from fractions import Fraction
from math import comb

import numpy as np

from core.dense_eigen import eigh
from core.errors import ValidationError
from core.graphs import cartesian_product, cube_graph, cycle_graph, laplacian, vertex_substitution
from core.spectral import PaleyWienerSpace, SpatialMask, ssl_eigen
from core.structured import (DIRICHLET, NEUMANN, cartesian_eigenvalues, cartesian_pq_spectrum,
                             cartesian_pw_basis, cartesian_pw_dimensions,
                             cartesian_regime_identities, corner_matrix, cube_eigenvalues,
                             cycle_phase, dim_k, dirichlet_basis, dirichlet_kernel,
                             hadamard_matrix, hadamard_vector, hamming_weights,
                             neumann_type_eigen, substitution_eigenbasis, substitution_eigenvalues,
                             substitution_pw_dimension)


class TestCubeBases(unittest.TestCase):
    def test_hadamard_eigenvectors(self):
        n_cube = 4
        lap = laplacian(cube_graph(n_cube)).data
        h = hadamard_matrix(n_cube)
        np.testing.assert_allclose(h.T @ h, np.eye(16), atol=1e-12)
        weights = hamming_weights(n_cube)
        np.testing.assert_allclose(lap @ h, h * (2.0 * weights), atol=1e-12)

    def test_hadamard_vector_bits(self):
        np.testing.assert_allclose(hadamard_vector(3, [1, 0, 1]), hadamard_vector(3, 5))
        self.assertAlmostEqual(hadamard_vector(3, 0)[7], 1 / np.sqrt(8))
        with self.assertRaises(ValidationError):
            hadamard_vector(3, [1, 0])
        with self.assertRaises(ValidationError):
            hadamard_vector(3, 8)

    def test_dirichlet_basis(self):
        n_cube = 5
        lap = laplacian(cube_graph(n_cube)).data
        for k in range(1, n_cube):
            d = dirichlet_basis(n_cube, k)
            self.assertEqual(d.shape, (32, comb(n_cube, k) - 1))
            np.testing.assert_allclose(d.T @ d, np.eye(d.shape[1]), atol=1e-12)
            np.testing.assert_allclose(d[0], 0.0, atol=1e-12)
            np.testing.assert_allclose(d[-1], 0.0, atol=1e-12)
            np.testing.assert_allclose(lap @ d, 2.0 * k * d, atol=1e-12)
        with self.assertRaises(ValidationError):
            dirichlet_basis(5, 0)

    def test_dim_k(self):
        self.assertEqual(dim_k(7, 3), 64)
        self.assertEqual(dim_k(7, 1), 8)
        self.assertEqual(dim_k(7, -1), 0)
        np.testing.assert_array_equal(cube_eigenvalues(2), [0.0, 2.0, 2.0, 4.0])


class TestAugmentedLaplacian(unittest.TestCase):
    def test_corner_matrix_is_rank_one(self):
        alpha = cycle_phase(2, 5)
        c = corner_matrix(3, alpha)
        np.testing.assert_allclose(c, c.conj().T)
        self.assertEqual(np.linalg.matrix_rank(c), 1)
        self.assertAlmostEqual(c[0, 0].real, 1.0)
        self.assertAlmostEqual(c[7, 7].real, 1.0)

    def test_single_edge_closed_form(self):
        """N=1: 2 ± |1+α|"""
        for nu in range(5):
            alpha = cycle_phase(nu, 5)
            eigen = neumann_type_eigen(1, nu, 5)
            expected = np.sort([2 - abs(1 + alpha), 2 + abs(1 + alpha)])
            np.testing.assert_allclose(eigen.eigenvalues, expected, atol=1e-12)

    def test_level_intervals(self):
        """K 번째 고유값은 [2K, 2K+2]"""
        for nu in range(21):
            values = neumann_type_eigen(7, nu, 21).eigenvalues
            self.assertEqual(len(values), 8)
            for k, value in enumerate(values):
                self.assertGreaterEqual(value, 2 * k - 1e-9)
                self.assertLessEqual(value, 2 * k + 2 + 1e-9)

    def test_zero_frequency_has_kernel(self):
        values = neumann_type_eigen(4, 0, 7).eigenvalues
        self.assertAlmostEqual(values[0], 0.0, places=10)

    def test_nu_out_of_range(self):
        with self.assertRaises(ValidationError):
            neumann_type_eigen(3, 5, 5)


class TestSubstitutionEigenbasis(unittest.TestCase):
    def test_oracle_grid(self):
        for n_cube in (1, 2, 3):
            for m in (3, 5, 7):
                with self.subTest(n_cube=n_cube, m=m):
                    basis = substitution_eigenbasis(n_cube, m)
                    lap = laplacian(vertex_substitution(n_cube, m)).data
                    oracle = eigh(lap).values
                    self.assertEqual(basis.vectors.shape, (m << n_cube, m << n_cube))
                    np.testing.assert_allclose(np.sort(basis.values), oracle, atol=1e-9)
                    gram = basis.vectors.conj().T @ basis.vectors
                    self.assertLess(np.abs(gram - np.eye(gram.shape[0])).max(), 1e-9)
                    residual = lap @ basis.vectors - basis.vectors * basis.values
                    self.assertLess(np.abs(residual).max(), 1e-9)

    def test_type_counts(self):
        basis = substitution_eigenbasis(2, 3)
        self.assertEqual(basis.kinds.count(DIRICHLET), 3)
        self.assertEqual(basis.kinds.count(NEUMANN), 9)
        manifest = basis.manifest()
        self.assertEqual(len(manifest), 12)
        self.assertEqual({row['type'] for row in manifest}, {DIRICHLET, NEUMANN})

    def test_single_edge_is_cycle(self):
        basis = substitution_eigenbasis(1, 5)
        expected = np.sort(4.0 * np.sin(np.pi * np.arange(10) / 10) ** 2)
        np.testing.assert_allclose(basis.values, expected, atol=1e-10)

    def test_eigenvalues_only(self):
        basis = substitution_eigenbasis(3, 5)
        np.testing.assert_allclose(substitution_eigenvalues(3, 5), basis.values, atol=1e-12)

    def test_truncated_dimension(self):
        basis = substitution_eigenbasis(7, 21, max_eigenvalue=6.0)
        self.assertEqual(basis.vectors.shape, (2688, 1323))
        self.assertEqual(basis.pw_space(6.0).dimension, 1323)
        self.assertEqual(substitution_pw_dimension(7, 21, 3), 1323)

    def test_dimension_formula_against_oracle(self):
        for n_cube in (2, 3, 4):
            for m in (3, 4, 5, 6):
                values = eigh(laplacian(vertex_substitution(n_cube, m))).values
                for k in range(1, n_cube):
                    with self.subTest(n_cube=n_cube, m=m, k=k):
                        counted = int(np.sum(values <= 2 * k + 1e-9))
                        self.assertEqual(substitution_pw_dimension(n_cube, m, k), counted)

    def test_rejects_bad_parameters(self):
        with self.assertRaises(ValidationError):
            substitution_eigenbasis(0, 5)
        with self.assertRaises(ValidationError):
            substitution_eigenbasis(3, 2)


class TestDirichletKernel(unittest.TestCase):
    def test_values(self):
        for n in range(0, 11):
            kernel = dirichlet_kernel(21, n)
            self.assertAlmostEqual(kernel[0], 2 * n + 1)
            self.assertAlmostEqual(np.linalg.norm(dirichlet_kernel(21, n, normalized=True)), 1.0)
        self.assertAlmostEqual(np.sum(dirichlet_kernel(21, 5) ** 2), 231.0)
        self.assertAlmostEqual(dirichlet_kernel(21, 5, normalized=True)[0],
                               np.sqrt(0.5 + 1 / 42))

    def test_out_of_range(self):
        with self.assertRaises(ValidationError):
            dirichlet_kernel(21, 11)


class TestCartesianDecomposition(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.decomposition = cartesian_pw_basis(7, 21, 3)

    def test_dimensions(self):
        self.assertEqual(self.decomposition.dimensions, (168, 231, 35))
        self.assertEqual(cartesian_pw_dimensions(7, 21, 3), (168, 231, 35))
        counted = int(np.sum(cartesian_eigenvalues(7, 21) <= 6 + 1e-9))
        self.assertEqual(counted, 434)

    def test_orthonormal(self):
        basis = self.decomposition.basis
        gram = basis.conj().T @ basis
        self.assertLess(np.abs(gram - np.eye(434)).max(), 1e-10)

    def test_in_pw_space(self):
        lap = laplacian(cartesian_product(cube_graph(7), cycle_graph(21))).data
        basis = self.decomposition.basis
        energy = np.real(np.einsum('ij,ij->j', basis.conj(), lap @ basis))
        self.assertLessEqual(energy.max(), 6 + 1e-9)

    def test_exact_pq_spectrum(self):
        pw = PaleyWienerSpace(omega=6.0, basis=self.decomposition.basis)
        ssl = ssl_eigen(pw, SpatialMask.block(7, 21, 0))
        expected = np.concatenate([np.ones(8), np.full(21, 11 / 21), np.full(35, 1 / 21),
                                   np.zeros(434 - 64)])
        np.testing.assert_allclose(ssl.eigenvalues, expected, atol=1e-8)
        self.assertEqual(ssl.count_one, 8)
        self.assertEqual(ssl.count_mid, 21)

    def test_predicted_spectrum(self):
        self.assertEqual(cartesian_pq_spectrum(7, 21, 3),
                         [(Fraction(1), 8), (Fraction(11, 21), 21), (Fraction(1, 21), 35)])
        self.assertEqual(cartesian_pq_spectrum(3, 5, 1), [(Fraction(3, 5), 1), (Fraction(1, 5), 3)])

    def test_regime_identities(self):
        errors = cartesian_regime_identities(self.decomposition, trials=100, seed=3)
        self.assertEqual(len(errors), 3)
        self.assertLess(max(errors), 1e-10)

    def test_shift_basis_only_for_quarter_residue(self):
        self.assertIsNotNone(self.decomposition.shift_basis)
        self.assertEqual(self.decomposition.shift_basis.shape, (2688, 231))
        self.assertIsNone(cartesian_pw_basis(3, 7, 1).shift_basis)

    def test_small_cycle_radius(self):
        """m=7: PW_2(C_7) 은 |k| ≤ 1"""
        self.assertEqual(cartesian_pw_dimensions(3, 7, 1), (0, 3, 3))
        counted = int(np.sum(cartesian_eigenvalues(3, 7) <= 2 + 1e-9))
        self.assertEqual(counted, 6)

    def test_level_out_of_range(self):
        with self.assertRaises(ValidationError):
            cartesian_pw_basis(3, 5, 3)


if __name__ == '__main__':
    unittest.main()
