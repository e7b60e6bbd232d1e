"""
그래프 구성 단위 테스트
"""
import unittest
from fractions import Fraction

import numpy as np

from core.errors import ValidationError
from core.graphs import (Graph, SymmetricMatrix, block_partition, cartesian_product,
                         clusterness_ratio, cube_graph, cube_label, cycle_graph,
                         induced_subgraph, laplacian, validate_partition, vertex_substitution)


class TestGraphBasics(unittest.TestCase):
    def test_from_edges_rejects_self_loop(self):
        with self.assertRaises(ValidationError):
            Graph.from_edges(3, [(0, 0)])

    def test_from_edges_rejects_duplicate(self):
        with self.assertRaises(ValidationError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_from_edges_rejects_out_of_range(self):
        with self.assertRaises(ValidationError):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_and_degrees(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], name="P_4")
        self.assertEqual(g.edges(), [(0, 1), (1, 2), (2, 3)])
        self.assertEqual(g.edge_count, 3)
        np.testing.assert_array_equal(g.degrees(), [1, 2, 2, 1])
        self.assertTrue(g.is_connected)

    def test_disconnected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        self.assertFalse(g.is_connected)

    def test_symmetric_matrix_rejects_non_square(self):
        with self.assertRaises(ValidationError):
            SymmetricMatrix.from_array(np.zeros((2, 3)))


class TestFamilies(unittest.TestCase):
    def test_cycle(self):
        c = cycle_graph(5)
        self.assertEqual(c.n, 5)
        self.assertEqual(c.edge_count, 5)
        self.assertTrue(all(c.degree(v) == 2 for v in range(5)))
        with self.assertRaises(ValidationError):
            cycle_graph(2)

    def test_cube_indexing(self):
        """인덱스 = Σ ε_i 2^{N-i}, 이웃은 한 비트 차이"""
        b = cube_graph(3)
        self.assertEqual(b.n, 8)
        self.assertEqual(b.edge_count, 12)
        self.assertEqual(b.index_of((1, 0, 1)), 5)
        self.assertEqual(cube_label(3, 6), (1, 1, 0))
        for v in range(8):
            for u in b.neighbors[v]:
                self.assertEqual(bin(u ^ v).count('1'), 1)

    def test_cube_rejects_zero(self):
        with self.assertRaises(ValidationError):
            cube_graph(0)

    def test_substitution_structure(self):
        """블록 k-1 의 v_1 과 블록 k 의 v_0 연결, 그 외 정점 차수는 N"""
        n_cube, m = 3, 5
        g = vertex_substitution(n_cube, m)
        size = 1 << n_cube
        self.assertEqual(g.n, m * size)
        self.assertEqual(g.edge_count, m * n_cube * (size // 2) + m)
        for block in range(m):
            last = block * size + size - 1
            first_next = ((block + 1) % m) * size
            self.assertIn(first_next, g.neighbors[last])
        degrees = g.degrees().reshape(m, size)
        np.testing.assert_array_equal(degrees[:, 0], n_cube + 1)
        np.testing.assert_array_equal(degrees[:, -1], n_cube + 1)
        np.testing.assert_array_equal(degrees[:, 1:-1], n_cube)
        self.assertEqual(g.index_of((2, 3)), 2 * size + 3)

    def test_cartesian_slice_major(self):
        cube = cube_graph(2)
        cycle = cycle_graph(4)
        g = cartesian_product(cube, cycle)
        self.assertEqual(g.n, 16)
        self.assertEqual(g.edge_count, cube.edge_count * 4 + 4 * cube.n)
        self.assertEqual(g.index_of((3, 2)), 2 * 4 + 3)
        self.assertIn(1 * 4 + 3, g.neighbors[0 * 4 + 3])
        self.assertIn(3 * 4 + 3, g.neighbors[0 * 4 + 3])

    def test_cartesian_spectrum_is_sumset(self):
        g = cartesian_product(cube_graph(2), cycle_graph(3))
        values = np.sort(np.linalg.eigvalsh(laplacian(g).data))
        cube = np.array([0.0, 2.0, 2.0, 4.0])
        cycle = 4.0 * np.sin(np.pi * np.arange(3) / 3) ** 2
        expected = np.sort(np.add.outer(cycle, cube).ravel())
        np.testing.assert_allclose(values, expected, atol=1e-10)


class TestLaplacianAndPartitions(unittest.TestCase):
    def test_laplacian_rows_sum_to_zero(self):
        lap = laplacian(vertex_substitution(2, 4)).data
        np.testing.assert_allclose(lap.sum(axis=1), 0.0)
        np.testing.assert_allclose(lap, lap.T)

    def test_induced_subgraph_reindexes(self):
        g = cycle_graph(6)
        sub = induced_subgraph(g, [4, 2, 3])
        self.assertEqual(sub.n, 3)
        self.assertEqual(sub.edges(), [(0, 1), (1, 2)])
        self.assertEqual(sub.parent_indices, (2, 3, 4))

    def test_induced_subgraph_disconnected_warns(self):
        with self.assertLogs('core.graphs', level='WARNING'):
            sub = induced_subgraph(cycle_graph(6), [0, 3])
        self.assertFalse(sub.is_connected)
        self.assertTrue(sub.disconnected)

    def test_induced_subgraph_disconnect_flag(self):
        sub = induced_subgraph(cycle_graph(4), [0, 2])
        self.assertEqual(sub.n, 2)
        self.assertEqual(sub.edge_count, 0)
        self.assertTrue(sub.disconnected)
        self.assertEqual(sub.parent_indices, (0, 2))

        path = induced_subgraph(cycle_graph(4), [0, 1, 2])
        self.assertFalse(path.disconnected)
        self.assertFalse(cycle_graph(4).disconnected)

    def test_validate_partition(self):
        g = cycle_graph(4)
        self.assertEqual(validate_partition(g, [[1, 0], [3, 2]]), [[0, 1], [2, 3]])
        with self.assertRaises(ValidationError):
            validate_partition(g, [[0, 1], [1, 2, 3]])
        with self.assertRaises(ValidationError):
            validate_partition(g, [[0, 1], [2]])
        with self.assertRaises(ValidationError):
            validate_partition(g, [[0, 1, 2, 3], []])

    def test_clusterness_substitution(self):
        g = vertex_substitution(7, 21)
        self.assertEqual(clusterness_ratio(g, block_partition(7, 21)), Fraction(448, 449))

    def test_clusterness_cartesian(self):
        g = cartesian_product(cube_graph(7), cycle_graph(21))
        self.assertEqual(clusterness_ratio(g, block_partition(7, 21)), Fraction(7, 9))


if __name__ == '__main__':
    unittest.main()
