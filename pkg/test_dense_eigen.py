"""
조밀 에르미트 고유값 솔버 테스트
"""
import unittest
from unittest.mock import patch

import numpy as np

from config import EigenConfig
from core.dense_eigen import (cluster_ranges, eigh, group_eigenvalues, householder_tridiagonalize,
                              tridiagonal_ql)
from core.errors import ConvergenceError, ValidationError
from core.graphs import SymmetricMatrix, cube_graph, laplacian


def random_hermitian(rng, n, complex_entries=True):
    a = rng.standard_normal((n, n))
    if complex_entries:
        a = a + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


class TestHouseholder(unittest.TestCase):
    def test_tridiagonal_similarity(self):
        rng = np.random.default_rng(1)
        for complex_entries in (False, True):
            a = random_hermitian(rng, 9, complex_entries)
            d, e, q = householder_tridiagonalize(a)
            t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
            np.testing.assert_allclose(q @ t @ q.conj().T, a, atol=1e-10)
            np.testing.assert_allclose(q.conj().T @ q, np.eye(9), atol=1e-12)
            self.assertFalse(np.iscomplexobj(e))


class TestTridiagonalQL(unittest.TestCase):
    def test_values_match_lapack(self):
        rng = np.random.default_rng(2)
        d = rng.standard_normal(12)
        e = rng.standard_normal(11)
        values, _ = tridiagonal_ql(d, e)
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        np.testing.assert_allclose(np.sort(values), np.linalg.eigvalsh(t), atol=1e-10)

    def test_sweep_limit_raises(self):
        d = np.array([1.0, 2.0, 3.0])
        e = np.array([1.0, 1.0])
        with self.assertRaises(ConvergenceError) as ctx:
            tridiagonal_ql(d, e, max_sweeps=0)
        self.assertEqual(ctx.exception.index, 0)
        self.assertEqual(ctx.exception.diagnostics()['sweeps'], 0)
        self.assertEqual(ctx.exception.diagnostics()['rotations'], 0)

    def test_rotation_budget_scales_with_order(self):
        # 3x3 블록만 결합: 스윕당 회전 2개 이하, 상한 1 * 12 = 12
        d = np.arange(1.0, 13.0)
        e = np.zeros(11)
        e[:2] = 1.0
        values, _ = tridiagonal_ql(d, e, max_sweeps=1)
        t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        np.testing.assert_allclose(np.sort(values), np.linalg.eigvalsh(t), atol=1e-10)

    def test_rotation_budget_exhausted(self):
        rng = np.random.default_rng(21)
        d = rng.standard_normal(12)
        e = 1.0 + rng.random(11)
        with self.assertRaises(ConvergenceError) as ctx:
            tridiagonal_ql(d, e, max_sweeps=1)
        diagnostics = ctx.exception.diagnostics()
        self.assertEqual(diagnostics['index'], 0)
        self.assertLessEqual(diagnostics['rotations'], 12)
        self.assertGreater(diagnostics['rotations'], 0)
        self.assertGreater(diagnostics['offdiag'], 0.0)


class TestEigh(unittest.TestCase):
    def test_random_hermitian_orders(self):
        rng = np.random.default_rng(3)
        for n in (1, 2, 5, 17, 40):
            a = random_hermitian(rng, n)
            result = eigh(a, backend="householder")
            self.assertTrue(np.all(np.diff(result.values) >= 0))
            np.testing.assert_allclose(result.values, np.linalg.eigvalsh(a), atol=1e-9)
            self.assertLess(result.residual_norm, 1e-9 * (1 + np.abs(result.values).max()))
            self.assertLess(result.orthogonality_error, 1e-10)
            np.testing.assert_allclose(result.reconstruct(), a, atol=1e-9)

    def test_large_orders_householder(self):
        rng = np.random.default_rng(30)
        cases = [(128, True), (257, True), (500, True), (500, False)]
        for n, complex_entries in cases:
            with self.subTest(n=n, complex_entries=complex_entries):
                a = random_hermitian(rng, n, complex_entries)
                result = eigh(a, backend="householder")
                self.assertEqual(result.backend, "householder")
                norm = np.abs(result.values).max()
                self.assertLessEqual(result.residual_norm, 1e-9 * (1 + norm))
                self.assertLessEqual(result.orthogonality_error, 1e-10)
                np.testing.assert_allclose(result.values, np.linalg.eigvalsh(a), atol=1e-9 * (1 + norm))

    def test_backends_agree(self):
        rng = np.random.default_rng(4)
        a = random_hermitian(rng, 30, complex_entries=False)
        householder = eigh(a, backend="householder")
        lapack = eigh(a, backend="lapack")
        np.testing.assert_allclose(householder.values, lapack.values, atol=1e-10)
        self.assertEqual(lapack.backend, "lapack")

    def test_auto_switches_to_lapack(self):
        a = np.diag(np.arange(6.0))
        result = eigh(a, eigen_config=EigenConfig(direct_max_order=4))
        self.assertEqual(result.backend, "lapack")
        result = eigh(a, eigen_config=EigenConfig(direct_max_order=10))
        self.assertEqual(result.backend, "householder")

    def test_degenerate_cube_spectrum(self):
        """B_4 라플라시안: 2κ 가 binom(4, κ) 중복"""
        result = eigh(laplacian(cube_graph(4)))
        groups = group_eigenvalues(result.values, 1e-9)
        self.assertEqual([round(v) for v, _ in groups], [0, 2, 4, 6, 8])
        self.assertEqual([c for _, c in groups], [1, 4, 6, 4, 1])
        self.assertLess(result.orthogonality_error, 1e-10)

    def test_phase_convention(self):
        rng = np.random.default_rng(5)
        result = eigh(random_hermitian(rng, 8))
        pivots = np.argmax(np.abs(result.vectors), axis=0)
        pivot_values = result.vectors[pivots, np.arange(8)]
        np.testing.assert_allclose(pivot_values.imag, 0.0, atol=1e-12)
        self.assertTrue(np.all(pivot_values.real > 0))

    def test_rejects_non_hermitian(self):
        with self.assertRaises(ValidationError):
            eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_nan(self):
        with self.assertRaises(ValidationError):
            eigh(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_unknown_backend(self):
        with self.assertRaises(ValidationError):
            eigh(np.eye(2), backend="magic")

    def test_convergence_error_propagates(self):
        with patch('core.dense_eigen.tridiagonal_ql',
                   side_effect=ConvergenceError("stalled", index=1, sweeps=30, offdiag=0.5)):
            with self.assertRaises(ConvergenceError):
                eigh(SymmetricMatrix.from_array(np.diag([1.0, 2.0, 3.0])), backend="householder")


class TestClusters(unittest.TestCase):
    def test_cluster_ranges(self):
        values = np.array([0.0, 1.0, 1.0 + 1e-12, 2.0])
        self.assertEqual(cluster_ranges(values, 1e-9), [(0, 1), (1, 3), (3, 4)])
        with self.assertRaises(ValidationError):
            cluster_ranges(values, -1.0)


if __name__ == '__main__':
    unittest.main()
