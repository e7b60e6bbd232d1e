"""
설정 / 입력 파싱 / 산출물 저장 / CLI 테스트
"""
import csv
import json
import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np
from click.testing import CliRunner

from config import AppConfig, build_run_config, load_config_from_env
from core.errors import ConvergenceError, ValidationError
from core.exporters import ArtifactWriter
from core.graphs import cycle_graph, laplacian
from core.parsers import InputParser
from main import ToolkitRunner, main


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        with patch.dict(os.environ, {}, clear=True):
            config = load_config_from_env()
        self.assertIsInstance(config, AppConfig)
        self.assertEqual(config.eigen.backend, "auto")
        self.assertEqual(config.eigen.direct_max_order, 512)
        self.assertEqual(config.eigen.max_sweeps, 30)
        self.assertEqual(config.output.output_format, "csv")
        self.assertTrue(config.database.enable_sqlite)

    def test_env_overrides(self):
        env = {'EIGEN_BACKEND': 'LAPACK', 'ENABLE_SQLITE': 'false', 'CSV_DIGITS': '10',
               'LOG_LEVEL': 'debug'}
        with patch.dict(os.environ, env, clear=True):
            config = load_config_from_env()
        self.assertEqual(config.eigen.backend, "lapack")
        self.assertFalse(config.database.enable_sqlite)
        self.assertEqual(config.output.csv_digits, 10)
        self.assertEqual(config.logging.log_level, "DEBUG")

    def test_bad_backend(self):
        with patch.dict(os.environ, {'EIGEN_BACKEND': 'bogus'}, clear=True):
            with self.assertRaises(ValidationError):
                load_config_from_env()

    def test_run_config_validation(self):
        args = dict(omega=None, block=0, tol=1e-8, output_dir='out', output_format='csv', seed=1)
        run_config = build_run_config('pq', 'substitution', 3, 5, 1, **args)
        self.assertEqual(run_config.resolved_omega(), 2.0)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'substitution', 3, 5, 3, **args)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'substitution', 3, 5, None, **args)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'substitution', 3, 2, 1, **args)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'torus', 3, 5, 1, **args)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'custom', None, None, None, **args)
        with self.assertRaises(ValidationError):
            build_run_config('abelian', 'abelian', None, None, None, **args)
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'substitution', 3, 5, 1, **dict(args, tol=0.0))
        with self.assertRaises(ValidationError):
            build_run_config('pq', 'substitution', 3, 5, 1, **dict(args, block=5))

    def test_dims_without_level(self):
        run_config = build_run_config('dims', 'cartesian', 4, 5, None, None, 0, 1e-8,
                                      'out', 'json', 1)
        self.assertIsNone(run_config.k_level)
        with self.assertRaises(ValidationError):
            run_config.resolved_omega()


class TestInputParser(unittest.TestCase):
    def setUp(self):
        self.parser = InputParser()
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_group_spec(self):
        self.assertEqual(self.parser.parse_group_spec("4x5").factors, (4, 5))
        self.assertEqual(self.parser.parse_group_spec("Z4xZ5").factors, (4, 5))
        self.assertEqual(self.parser.parse_group_spec("12").factors, (12,))
        with self.assertRaises(ValidationError):
            self.parser.parse_group_spec("axb")

    def test_subsets(self):
        group = self.parser.parse_group_spec("3x4")
        subset, sigma = self.parser.parse_subsets(
            group, json.dumps({'S': [[0, 0], [1, 1], [2, 3]], 'Sigma': [[0, 0]]}))
        self.assertEqual(len(subset), 3)
        self.assertEqual(len(sigma), 1)
        with self.assertRaises(ValidationError):
            self.parser.parse_subsets(group, json.dumps({'S': [0, 1], 'Sigma': [[0, 0]]}))
        with self.assertRaises(ValidationError):
            self.parser.parse_subsets(group, json.dumps({'S': [[0, 0]]}))
        with self.assertRaises(ValidationError):
            self.parser.parse_subsets(group, '{not json')

    def test_subsets_from_file(self):
        path = Path(self.temp_dir) / 'subsets.json'
        path.write_text(json.dumps({'S': [0, 1, 7], 'Sigma': [0]}), encoding='utf-8')
        group = self.parser.parse_group_spec("8")
        subset, _ = self.parser.parse_subsets(group, str(path))
        self.assertTrue(subset.symmetric)

    def test_partition(self):
        self.assertEqual(self.parser.parse_partition('[[1, 0], [2, 3]]', 4), [[0, 1], [2, 3]])
        self.assertEqual(self.parser.parse_partition('{"partition": [[0, 1, 2]]}', 3), [[0, 1, 2]])
        with self.assertRaises(ValidationError):
            self.parser.parse_partition('[[0, 1], [1, 2]]', 3)

    def test_edge_list(self):
        path = Path(self.temp_dir) / 'square.edges'
        path.write_text("# square\n0 1\n1 2\n\n2 3\n3 0  # close\n", encoding='utf-8')
        graph = self.parser.read_edge_list(path)
        self.assertEqual(graph.n, 4)
        self.assertEqual(graph.edge_count, 4)
        self.assertEqual(graph.name, 'square')

        bad = Path(self.temp_dir) / 'bad.edges'
        bad.write_text("0 1 2\n", encoding='utf-8')
        with self.assertRaises(ValidationError):
            self.parser.read_edge_list(bad)
        with self.assertRaises(ValidationError):
            self.parser.read_edge_list(Path(self.temp_dir) / 'missing.edges')


class TestArtifactWriter(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.writer = ArtifactWriter(self.temp_dir, digits=15, version='0.3.0',
                                     config_echo={'seed': 3})

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_csv_and_sidecar(self):
        path = self.writer.write_csv('values.csv', ['index', 'eigenvalue'],
                                     [(0, 1.0 / 3.0), (1, np.float64(2.0))])
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ['index', 'eigenvalue'])
        self.assertEqual(rows[1], ['0', '0.333333333333333'])
        self.assertEqual(rows[2], ['1', '2'])

        meta = json.loads(Path(str(path) + '.meta.json').read_text(encoding='utf-8'))
        self.assertEqual(meta['rows'], 2)
        self.assertEqual(meta['toolkit_version'], '0.3.0')
        self.assertEqual(meta['config'], {'seed': 3})
        self.assertEqual(self.writer.get_statistics()['csv_saves'], 1)

    def test_json_converts_numpy(self):
        path = self.writer.write_json('report.json', {'values': np.array([1.0, 2.0]),
                                                      'count': np.int64(3)})
        data = json.loads(path.read_text(encoding='utf-8'))
        self.assertEqual(data, {'count': 3, 'values': [1.0, 2.0]})

    def test_laplacian_matrix_market(self):
        graph = cycle_graph(5)
        path = self.writer.write_laplacian_mm(graph)
        self.assertEqual(path.suffix, '.mtx')
        np.testing.assert_allclose(self.writer.read_matrix_mm(path), laplacian(graph).data)

    def test_edge_list_and_plot_script(self):
        path = self.writer.write_edge_list(cycle_graph(4))
        self.assertEqual(path.read_text(encoding='utf-8').splitlines(),
                         ['0 1', '0 3', '1 2', '2 3'])
        script = self.writer.write_plot_script('fig2', ['fig2_eigenvalues.csv'])
        text = script.read_text(encoding='utf-8')
        self.assertIn("['fig2_eigenvalues.csv']", text)
        self.assertIn('matplotlib', text)

    def test_decomposition_and_basis(self):
        values = np.array([0.0, 2.0])
        vectors = np.array([[1.0, 1.0j], [1.0, -1.0j]]) / np.sqrt(2.0)
        paths = self.writer.write_decomposition(values, vectors, 'dec')
        self.assertEqual([p.name for p in paths], ['dec_values.csv', 'dec_vectors.csv'])
        with open(paths[1], newline='', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 4)
        self.assertAlmostEqual(float(rows[2]['im']), 1.0 / np.sqrt(2.0))

        paths = self.writer.write_basis(vectors, [{'type': 'a'}, {'type': 'b'}], 'basis')
        with open(paths[0], newline='', encoding='utf-8') as f:
            header = next(csv.reader(f))
        self.assertEqual(header, ['vertex', 're0', 'im0', 're1', 'im1'])
        manifest = json.loads(paths[1].read_text(encoding='utf-8'))
        self.assertEqual(manifest['columns'][1], {'type': 'b'})

    def test_write_error_is_counted(self):
        with patch('builtins.open', side_effect=OSError("disk full")):
            self.assertIsNone(self.writer.write_csv('x.csv', ['a'], [(1,)]))
        self.assertEqual(self.writer.get_statistics()['errors'], 1)


class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.out = os.path.join(self.temp_dir, 'out')
        self.env = {'ENABLE_SQLITE': 'false', 'LOG_LEVEL': 'WARNING'}
        self.runner = CliRunner()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def invoke(self, *args, env=None, out=None):
        return self.runner.invoke(main, ['--no-log-file', *args, '--out', out or self.out],
                                  env=env or self.env)

    def test_dims(self):
        result = self.invoke('dims', '--n', '3', '--m', '5')
        self.assertEqual(result.exit_code, 0, result.output)
        report = json.loads(Path(self.out, 'dims.json').read_text(encoding='utf-8'))
        self.assertTrue(report['consistent'])
        self.assertEqual([row['K'] for row in report['rows']], [1, 2])
        self.assertTrue(Path(self.out, 'dims.csv').exists())

    def test_cartesian_dims_reference(self):
        result = self.invoke('dims', '--family', 'cartesian', '--n', '7', '--m', '21', '--k', '3')
        self.assertEqual(result.exit_code, 0, result.output)
        report = json.loads(Path(self.out, 'dims.json').read_text(encoding='utf-8'))
        self.assertEqual(report['rows'][0]['components'], [168, 231, 35])
        self.assertEqual(report['rows'][0]['counted'], 434)

    def test_pq_is_deterministic(self):
        second = os.path.join(self.temp_dir, 'second')
        for target in (self.out, second):
            result = self.invoke('pq', '--n', '3', '--m', '5', '--k', '1', '--vectors', '2',
                                 out=target)
            self.assertEqual(result.exit_code, 0, result.output)
        for name in ('pq_eigenvalues.csv', 'pq_vectors.csv'):
            first_bytes = Path(self.out, name).read_bytes()
            self.assertEqual(first_bytes, Path(second, name).read_bytes())

    def test_json_format(self):
        result = self.invoke('pq', '--n', '3', '--m', '5', '--k', '1', '--format', 'json')
        self.assertEqual(result.exit_code, 0, result.output)
        table = json.loads(Path(self.out, 'pq_eigenvalues.json').read_text(encoding='utf-8'))
        self.assertEqual(table['columns'], ['index', 'eigenvalue'])
        self.assertEqual(table['rows'][0][0], 1)

    def test_invalid_level_exits_2(self):
        result = self.invoke('pq', '--n', '3', '--m', '5', '--k', '3')
        self.assertEqual(result.exit_code, 2)

    def test_unknown_family_exits_2(self):
        result = self.invoke('pq', '--family', 'torus', '--n', '3', '--m', '5', '--k', '1')
        self.assertEqual(result.exit_code, 2)

    def test_convergence_exits_3(self):
        error = ConvergenceError("stalled", index=4, sweeps=30, offdiag=1e-3)
        with patch('main.substitution_pq', side_effect=error):
            result = self.invoke('pq', '--n', '3', '--m', '5', '--k', '1')
        self.assertEqual(result.exit_code, 3)

    def test_abelian_with_subsets(self):
        subsets = json.dumps({'S': [0, 1, 2, 10, 11], 'Sigma': [0, 1, 11]})
        result = self.invoke('abelian', '--group', '12', '--subsets', subsets)
        self.assertEqual(result.exit_code, 0, result.output)
        report = json.loads(Path(self.out, 'accumulation.json').read_text(encoding='utf-8'))
        self.assertLess(report['max_deviation'], 1e-10)

    def test_abelian_random_cases(self):
        result = self.invoke('abelian', '--group', '3x4', '--trials', '5', '--seed', '9')
        self.assertEqual(result.exit_code, 0, result.output)
        with open(Path(self.out, 'accumulation_cases.csv'), newline='', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 5)
        self.assertTrue(all(float(r['max_deviation']) < 1e-10 for r in rows))

    def test_abelian_asymmetric_exits_2(self):
        subsets = json.dumps({'S': [0, 1], 'Sigma': [0]})
        result = self.invoke('abelian', '--group', '8', '--subsets', subsets)
        self.assertEqual(result.exit_code, 2)

    def test_custom_graph_pq(self):
        edges = Path(self.temp_dir, 'ring.edges')
        edges.write_text("".join(f"{i} {(i + 1) % 6}\n" for i in range(6)), encoding='utf-8')
        result = self.invoke('pq', '--family', 'custom', '--edges', str(edges),
                             '--omega', '1.0', '--mask', '[0, 1, 2]')
        self.assertEqual(result.exit_code, 0, result.output)
        with open(Path(self.out, 'pq_eigenvalues.csv'), newline='', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        # C_6 의 PW_1 은 0, 1 (x2) 고유값으로 3 차원
        self.assertEqual(len(rows), 3)

    def test_custom_graph_spectrum(self):
        edges = Path(self.temp_dir, 'ring.edges')
        edges.write_text("".join(f"{i} {(i + 1) % 6}\n" for i in range(6)), encoding='utf-8')
        result = self.invoke('spectrum', '--family', 'custom', '--edges', str(edges))
        self.assertEqual(result.exit_code, 0, result.output)
        with open(Path(self.out, 'multiplicities.csv'), newline='', encoding='utf-8') as f:
            counts = [int(row['multiplicity']) for row in csv.DictReader(f)]
        self.assertEqual(counts, [1, 2, 2, 1])
        self.assertTrue(Path(self.out, 'decomposition_vectors.csv').exists())

    def test_pesenson_blocks(self):
        result = self.invoke('pesenson', '--n', '3', '--m', '5', '--omega', '0.5', '--trials', '10')
        self.assertEqual(result.exit_code, 0, result.output)
        report = json.loads(Path(self.out, 'pesenson.json').read_text(encoding='utf-8'))
        self.assertTrue(report['admissible'])
        self.assertTrue(report['lower_bound_holds'])

    def test_cartesian_command(self):
        result = self.invoke('cartesian', '--n', '4', '--m', '5', '--k', '2', '--trials', '5')
        self.assertEqual(result.exit_code, 0, result.output)
        report = json.loads(Path(self.out, 'cartesian_regimes.json').read_text(encoding='utf-8'))
        self.assertEqual(report['dimensions'], [5, 12, 6])
        self.assertLess(max(report['max_errors']), 1e-10)

    def test_figure_data(self):
        result = self.invoke('figure', '--figure', 'fig2', '--n', '3', '--m', '5', '--k', '1')
        self.assertEqual(result.exit_code, 0, result.output)
        with open(Path(self.out, 'fig2_eigenvalues.csv'), newline='', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 40)
        self.assertAlmostEqual(float(rows[0]['eigenvalue']), 0.0, places=10)
        self.assertTrue(Path(self.out, 'plot_fig2.py').exists())

    def test_history_records_runs(self):
        env = {'ENABLE_SQLITE': 'true', 'LOG_LEVEL': 'WARNING',
               'DATABASE_PATH': os.path.join(self.temp_dir, 'runs.db')}
        self.assertEqual(self.invoke('dims', '--n', '3', '--m', '5', env=env).exit_code, 0)
        self.assertEqual(self.invoke('pq', '--n', '3', '--m', '5', '--k', '3', env=env).exit_code, 2)
        result = self.runner.invoke(main, ['--no-log-file', 'history', '--limit', '5'], env=env)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('"total_runs": 1', result.output)
        self.assertIn('dims', result.output)

    def test_unknown_report_and_figure_rejected(self):
        with patch.dict(os.environ, {'ENABLE_SQLITE': 'false'}):
            config = load_config_from_env()
        run_config = build_run_config('dims', 'substitution', 3, 5, None, None, 0, 1e-8,
                                      self.out, 'csv', 1)
        runner = ToolkitRunner(config, run_config)
        with self.assertRaises(ValidationError):
            runner.run_report('spectrum', {})
        with self.assertRaises(ValidationError):
            runner.emit_figure_data('fig6')
        with self.assertRaises(ValidationError):
            runner.run('plot')


if __name__ == '__main__':
    unittest.main()
