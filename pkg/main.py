"""
큐브-사이클 그래프 공간-스펙트럼 제한 툴킷 CLI

종료 코드: 0 정상, 2 입력 오류, 3 고유값 반복 미수렴
"""
import json
import logging
import time
from typing import Dict, List, Optional, Sequence, Tuple

import click
import numpy as np

from config import (FAMILIES, OUTPUT_FORMATS, AppConfig, RunConfig, build_run_config,
                    load_config_from_env, setup_logging)
from core import __version__
from core.abelian import random_symmetric_subset, spectral_accumulation
from core.errors import ConvergenceError, ValidationError
from core.exporters import ArtifactWriter
from core.graphs import (Graph, block_partition, cartesian_product, clusterness_ratio, cube_graph,
                         cycle_graph, vertex_substitution)
from core.parsers import InputParser
from core.sampling import (concentration_check, conjecture_check, cyclic_shift, frame_bounds,
                           numerical_rank, pesenson_report, substitution_pq)
from core.spectral import (PaleyWienerSpace, SSLReport, SpatialMask, eigenvalue_multiplicities,
                           graph_fourier, pw_space, ssl_eigen)
from core.structured import (cartesian_eigenvalues, cartesian_pq_spectrum, cartesian_pw_basis,
                             cartesian_pw_dimensions, cartesian_regime_identities, dim_k,
                             substitution_eigenbasis, substitution_eigenvalues,
                             substitution_pw_dimension)
from database import ResultsDatabase
from models import RegimeReport, RunRecord, to_builtin

FIGURES = ('fig2', 'fig3', 'fig4', 'fig5', 'fig7', 'fig8')
REPORTS = ('conjecture', 'frame', 'pesenson', 'accumulation', 'dims')

# 그림용 고유벡터 번호 (1 기반, PQ 고유값 내림차순)
FIG4_INDICES = (32, 62, 64)
FIG5_INDICES = (61, 62, 63, 64)
FIG2_RANKS = 620


class ToolkitRunner:
    def __init__(self, config: AppConfig, run_config: RunConfig):
        self.config = config
        self.run_config = run_config
        self.logger = logging.getLogger(__name__)

        # 핵심 컴포넌트 초기화
        self.parser = InputParser()
        self.writer = ArtifactWriter(
            output_dir=run_config.output_dir,
            digits=config.output.csv_digits,
            version=__version__,
            config_echo=run_config.to_dict()
        )

        self.database = None
        if config.database.enable_sqlite:
            try:
                self.database = ResultsDatabase(config.database.db_path)
            except Exception as e:
                self.logger.error(f"실행 기록 데이터베이스 초기화 실패: {e}")

        # 통계 정보
        self.stats = {
            'start_time': None,
            'errors': 0
        }

    # ------------------------------------------------------------------
    # 공통 도우미
    # ------------------------------------------------------------------

    def write_table(self, name: str, header: Sequence[str], rows) -> None:
        """출력 형식에 따라 CSV 또는 JSON 표로 저장"""
        if self.run_config.output_format == 'json':
            self.writer.write_json(f"{name}.json", {'columns': list(header),
                                                    'rows': [list(row) for row in rows]})
        else:
            self.writer.write_csv(f"{name}.csv", header, rows)

    def build_graph(self) -> Graph:
        rc = self.run_config
        if rc.family == 'substitution':
            return vertex_substitution(rc.n_cube, rc.m_cycle)
        if rc.family == 'cartesian':
            return cartesian_product(cube_graph(rc.n_cube), cycle_graph(rc.m_cycle))
        if rc.family == 'custom':
            return self.parser.read_edge_list(rc.edges)
        raise ValidationError(f"그래프가 없는 family 입니다: {rc.family}")

    def _cartesian_pq(self, block: int) -> Tuple[PaleyWienerSpace, SSLReport]:
        """세 성분 분해를 정규직교 기저로 쓰는 B_N □ C_m 슬라이스 PQ"""
        rc = self.run_config
        decomposition = cartesian_pw_basis(rc.n_cube, rc.m_cycle, rc.k_level)
        pw = PaleyWienerSpace(omega=2.0 * rc.k_level, basis=decomposition.basis)
        ssl = ssl_eigen(pw, SpatialMask.block(rc.n_cube, rc.m_cycle, block),
                        one_tol=rc.tol, eigen_config=self.config.eigen)
        return pw, ssl

    def family_pq(self, block: Optional[int] = None) -> Tuple[PaleyWienerSpace, SSLReport]:
        """family 별 PW 공간과 마스크 PQ 고유분해"""
        rc = self.run_config
        block = rc.block if block is None else block
        omega = rc.resolved_omega()

        if rc.family == 'substitution':
            return substitution_pq(rc.n_cube, rc.k_level or 0, rc.m_cycle, block=block, tol=rc.tol,
                                   omega=omega, eigen_config=self.config.eigen,
                                   pw_tol=self.config.spectral.pw_tol)
        if rc.family == 'cartesian' and rc.k_level is not None and omega == 2.0 * rc.k_level:
            return self._cartesian_pq(block)

        graph = self.build_graph()
        if rc.family == 'custom':
            source = rc.extra.get('mask')
            if not source:
                raise ValidationError("custom: --mask 정점 목록(JSON)이 필요합니다")
            mask = SpatialMask.from_indices(self.parser.load_json(source), graph.n)
        else:
            mask = SpatialMask.block(rc.n_cube, rc.m_cycle, block)
        pw = pw_space(graph_fourier(graph, eigen_config=self.config.eigen), omega,
                      self.config.spectral.pw_tol)
        ssl = ssl_eigen(pw, mask, one_tol=rc.tol, eigen_config=self.config.eigen)
        return pw, ssl

    def _require_family(self, command: str, *families: str):
        if self.run_config.family not in families:
            raise ValidationError(f"{command}: 지원하지 않는 family 입니다: {self.run_config.family} "
                                  f"(가능: {', '.join(families)})")

    # ------------------------------------------------------------------
    # 명령
    # ------------------------------------------------------------------

    def run_spectrum(self) -> Dict:
        """라플라시안 스펙트럼, 중복도, 간선 목록과 Matrix Market 저장"""
        self._require_family('spectrum', 'substitution', 'cartesian', 'custom')
        rc = self.run_config
        graph = self.build_graph()

        if rc.family == 'substitution':
            values = substitution_eigenvalues(rc.n_cube, rc.m_cycle, eigen_config=self.config.eigen)
        elif rc.family == 'cartesian':
            values = cartesian_eigenvalues(rc.n_cube, rc.m_cycle)
        else:
            spectrum = graph_fourier(graph, eigen_config=self.config.eigen)
            values = spectrum.values
            self.writer.write_decomposition(values, spectrum.vectors, 'decomposition')

        multiplicities = eigenvalue_multiplicities(values)
        self.write_table('spectrum', ['index', 'eigenvalue'], enumerate(values))
        self.write_table('multiplicities', ['eigenvalue', 'multiplicity'], multiplicities)
        self.writer.write_edge_list(graph)
        self.writer.write_laplacian_mm(graph)

        summary = {'vertices': graph.n, 'edges': graph.edge_count,
                   'distinct_eigenvalues': len(multiplicities),
                   'max_eigenvalue': float(values[-1])}

        if rc.family == 'substitution' and rc.omega is not None:
            basis = substitution_eigenbasis(rc.n_cube, rc.m_cycle, max_eigenvalue=rc.omega,
                                            tol=self.config.spectral.pw_tol,
                                            eigen_config=self.config.eigen)
            self.writer.write_basis(basis.vectors, basis.manifest(), 'pw_basis')
            summary['pw_dimension'] = basis.vectors.shape[1]
        return summary

    def run_pq(self) -> Dict:
        """마스크 PQ 고유값 (내림차순) 과 선택적 고유벡터 저장"""
        self._require_family('pq', 'substitution', 'cartesian', 'custom')
        pw, ssl = self.family_pq()
        self.write_table('pq_eigenvalues', ['index', 'eigenvalue'],
                         ((i + 1, value) for i, value in enumerate(ssl.eigenvalues)))

        count = min(int(self.run_config.extra.get('vectors') or 0), ssl.vectors.shape[1])
        if count:
            vectors = ssl.vectors[:, :count]
            self.write_table('pq_vectors', ['vertex', 'vector', 're', 'im'],
                             ((i, j + 1, vectors[i, j].real, vectors[i, j].imag)
                              for j in range(count) for i in range(vectors.shape[0])))

        return {'pw_dimension': pw.dimension, 'count_one': ssl.count_one,
                'count_mid': ssl.count_mid, 'count_small': ssl.count_small,
                'mid_eigenvalues': ssl.mid_eigenvalues}

    def run_conjecture(self) -> Dict:
        """블록 0 PQ 개수 / 시프트 랭크 검사와 블록별 집중도 부등식"""
        self._require_family('conjecture', 'substitution')
        rc = self.run_config
        report = conjecture_check(rc.n_cube, rc.k_level, rc.m_cycle, tol=rc.tol,
                                  rank_rtol=self.config.spectral.rank_rtol,
                                  eigen_config=self.config.eigen)
        concentration = concentration_check(rc.n_cube, rc.k_level, rc.m_cycle, trials=rc.trials,
                                            seed=rc.seed, tol=rc.tol, eigen_config=self.config.eigen)
        self.run_report('conjecture', report)
        self.writer.write_json('concentration.json', concentration)
        self.write_table('concentration_ratios', ['trial', 'block', 'ratio'], concentration.ratios)
        return {'conjecture_holds': report.conjecture_holds, 'predicted': report.predicted,
                'count_one': report.count_one, 'count_mid': report.count_mid,
                'shift_rank': report.shift_rank,
                'concentration_lower_bound_holds': concentration.lower_bound_holds,
                'mu_k': concentration.mu_k}

    def run_frame(self) -> Dict:
        """1/2 초과 PQ 고유벡터의 모든 순환 시프트가 PW 공간의 프레임인지 검사"""
        self._require_family('frame', 'substitution', 'cartesian')
        rc = self.run_config
        pw, ssl = self.family_pq(block=0)
        above = ssl.above_half
        system = np.hstack([cyclic_shift(above, k, rc.family, rc.n_cube) for k in range(rc.m_cycle)])
        report = frame_bounds(system, pw, rank_rtol=self.config.spectral.rank_rtol,
                              eigen_config=self.config.eigen)
        self.run_report('frame', report)
        return {'is_frame': report.is_frame, 'lower': report.lower, 'upper': report.upper,
                'rank': report.rank, 'dimension': report.dimension}

    def run_pesenson(self) -> Dict:
        """클러스터 평균 샘플링 하한 검사"""
        self._require_family('pesenson', 'substitution', 'cartesian', 'custom')
        rc = self.run_config
        graph = self.build_graph()
        source = rc.extra.get('partition')
        if source:
            partition = self.parser.parse_partition(source, graph.n)
        elif rc.family == 'custom':
            raise ValidationError("custom: --partition 이 필요합니다")
        else:
            partition = block_partition(rc.n_cube, rc.m_cycle)

        report = pesenson_report(graph, partition, rc.resolved_omega(), epsilon=rc.epsilon,
                                 trials=rc.trials, seed=rc.seed,
                                 pw_tol=self.config.spectral.pw_tol, eigen_config=self.config.eigen)
        self.run_report('pesenson', report)
        self.write_table('pesenson_ratios', ['trial', 'ratio'], enumerate(report.ratios))
        return {'admissible': report.admissible, 'lower_bound_holds': report.lower_bound_holds,
                'lower_constant': report.lower_constant, 'empirical_min': report.empirical_min,
                'clusterness': clusterness_ratio(graph, partition)}

    def run_cartesian(self) -> Dict:
        """B_N □ C_m 세 성분 차원, 측정 항등식, PQ 스펙트럼 예측과 계산값 비교"""
        rc = self.run_config
        decomposition = cartesian_pw_basis(rc.n_cube, rc.m_cycle, rc.k_level)
        errors = cartesian_regime_identities(decomposition, trials=rc.trials, seed=rc.seed)
        report = RegimeReport(n_cube=rc.n_cube, m_cycle=rc.m_cycle, k_level=rc.k_level,
                              dimensions=list(decomposition.dimensions),
                              constants=list(decomposition.constants),
                              max_errors=errors, trials=rc.trials)
        self.writer.write_json('cartesian_regimes.json', report)

        pw = PaleyWienerSpace(omega=2.0 * rc.k_level, basis=decomposition.basis)
        ssl = ssl_eigen(pw, SpatialMask.block(rc.n_cube, rc.m_cycle, 0), one_tol=rc.tol,
                        eigen_config=self.config.eigen)
        predicted = cartesian_pq_spectrum(rc.n_cube, rc.m_cycle, rc.k_level)
        expected = np.concatenate([np.full(mult, float(value)) for value, mult in predicted]
                                  + [np.zeros(pw.dimension - sum(mult for _, mult in predicted))])
        self.write_table('cartesian_pq', ['index', 'eigenvalue', 'predicted'],
                         ((i + 1, a, b) for i, (a, b) in enumerate(zip(ssl.eigenvalues, expected))))

        summary = {'dimensions': decomposition.dimensions, 'pw_dimension': pw.dimension,
                   'predicted_spectrum': predicted,
                   'spectrum_max_error': float(np.abs(ssl.eigenvalues - expected).max()),
                   'regime_max_error': report.max_error}
        if decomposition.shift_basis is not None:
            summary['shift_rank'] = numerical_rank(decomposition.shift_basis,
                                                   self.config.spectral.rank_rtol)
        return summary

    def run_abelian(self) -> Dict:
        """유한 아벨 군 스펙트럼 누적 항등식 (부분집합 지정 또는 무작위 사례)"""
        rc = self.run_config
        group = self.parser.parse_group_spec(rc.group)
        zero_tol = self.config.spectral.zero_mode_tol

        if rc.subsets:
            subset, sigma = self.parser.parse_subsets(group, rc.subsets)
            report = spectral_accumulation(group, subset, sigma, zero_mode_tol=zero_tol,
                                           eigen_config=self.config.eigen)
            self.run_report('accumulation', report)
            return {'group': str(group), 'max_deviation': report.max_deviation,
                    'mercer_deviation': report.mercer_deviation,
                    'trace': report.trace, 'expected_trace': report.expected_trace}

        rng = np.random.default_rng(rc.seed)
        rows = []
        for case in range(rc.trials):
            sigma = random_symmetric_subset(group, int(rng.integers(1, group.order + 1)), rng)
            subset = random_symmetric_subset(group, int(rng.integers(len(sigma), group.order + 1)), rng)
            report = spectral_accumulation(group, subset, sigma, zero_mode_tol=zero_tol,
                                           eigen_config=self.config.eigen)
            rows.append((case, len(subset), len(sigma), report.max_deviation,
                         report.mercer_deviation))
        self.write_table('accumulation_cases',
                         ['case', 's_size', 'sigma_size', 'max_deviation', 'mercer_deviation'], rows)
        return {'group': str(group), 'cases': len(rows),
                'max_deviation': max(r[3] for r in rows),
                'max_mercer_deviation': max(r[4] for r in rows)}

    def run_dims(self) -> Dict:
        """PW_{2K} 차원 공식과 스펙트럼에서 센 값 비교"""
        self._require_family('dims', 'substitution', 'cartesian')
        rc = self.run_config
        levels = [rc.k_level] if rc.k_level is not None else list(range(1, rc.n_cube))
        tol = self.config.spectral.pw_tol

        rows = []
        if rc.family == 'substitution':
            values = substitution_eigenvalues(rc.n_cube, rc.m_cycle, eigen_config=self.config.eigen)
            for k in levels:
                rows.append({'K': k, 'dim_k': dim_k(rc.n_cube, k),
                             'formula': substitution_pw_dimension(rc.n_cube, rc.m_cycle, k),
                             'counted': int(np.sum(values <= 2.0 * k + tol))})
        else:
            values = cartesian_eigenvalues(rc.n_cube, rc.m_cycle)
            for k in levels:
                components = cartesian_pw_dimensions(rc.n_cube, rc.m_cycle, k)
                rows.append({'K': k, 'components': list(components), 'formula': sum(components),
                             'counted': int(np.sum(values <= 2.0 * k + tol))})

        consistent = all(row['formula'] == row['counted'] for row in rows)
        self.run_report('dims', {'family': rc.family, 'n_cube': rc.n_cube, 'm_cycle': rc.m_cycle,
                                 'rows': rows, 'consistent': consistent})
        self.write_table('dims', ['K', 'formula', 'counted'],
                         ((row['K'], row['formula'], row['counted']) for row in rows))
        if not consistent:
            self.logger.error(f"차원 공식과 스펙트럼 개수가 다릅니다: {rows}")
        return {'consistent': consistent, 'rows': rows}

    # ------------------------------------------------------------------
    # 리포트 / 그림
    # ------------------------------------------------------------------

    def run_report(self, report_id: str, report) -> None:
        """리포트를 <report_id>.json 으로 저장"""
        if report_id not in REPORTS:
            raise ValidationError(f"알 수 없는 리포트: {report_id} (가능: {', '.join(REPORTS)})")
        self.writer.write_json(f"{report_id}.json", report)
        self.logger.info(f"리포트 저장 - {report_id}.json")

    def _traces(self, ssl: SSLReport, pw: PaleyWienerSpace, indices: Sequence[int],
                figure: str) -> List[str]:
        """선택한 고유벡터의 앞 세 블록 값과 고유기저 계수 크기"""
        rc = self.run_config
        chosen = [i for i in indices if i <= ssl.vectors.shape[1]]
        if len(chosen) < len(indices):
            self.logger.warning(f"{figure}: PQ 고유벡터 수 {ssl.vectors.shape[1]} 를 넘는 번호 제외")
        vectors = ssl.vectors[:, [i - 1 for i in chosen]]
        span = min(3 << rc.n_cube, vectors.shape[0])

        header = ['vertex'] + [f"psi{i}_{part}" for i in chosen for part in ('re', 'im')]
        trace_name = f"{figure}_traces.csv"
        self.writer.write_csv(trace_name, header,
                              ([v] + [x for j in range(len(chosen))
                                      for x in (vectors[v, j].real, vectors[v, j].imag)]
                               for v in range(span)))

        coefficients = np.abs(pw.basis.conj().T @ vectors)
        coefficient_name = f"{figure}_fourier.csv"
        self.writer.write_csv(coefficient_name, ['coefficient'] + [f"psi{i}" for i in chosen],
                              ([c] + list(coefficients[c]) for c in range(coefficients.shape[0])))
        return [trace_name, coefficient_name]

    def emit_figure_data(self, figure: str) -> Dict:
        """그림 데이터 CSV 와 플롯 스크립트 저장 (그림 데이터는 항상 CSV)"""
        rc = self.run_config
        if figure not in FIGURES:
            raise ValidationError(f"알 수 없는 그림: {figure} (가능: {', '.join(FIGURES)})")

        names: List[str] = []
        summary: Dict = {'figure': figure}

        if figure == 'fig2':
            values = substitution_eigenvalues(rc.n_cube, rc.m_cycle, eigen_config=self.config.eigen)
            count = min(FIG2_RANKS, len(values))
            names.append('fig2_eigenvalues.csv')
            self.writer.write_csv(names[-1], ['rank', 'eigenvalue'],
                                  ((i + 1, values[i]) for i in range(count)))
            summary['ranks'] = count

        elif figure == 'fig3':
            _, ssl = self.family_pq(block=0)
            names.append('fig3_pq_eigenvalues.csv')
            self.writer.write_csv(names[-1], ['index', 'eigenvalue'],
                                  ((i + 1, v) for i, v in enumerate(ssl.eigenvalues)))
            summary.update(count_one=ssl.count_one, count_mid=ssl.count_mid)

        elif figure == 'fig4':
            pw, ssl = self.family_pq(block=0)
            names.extend(self._traces(ssl, pw, FIG4_INDICES, figure))
            summary['eigenvalues'] = {i: float(ssl.eigenvalues[i - 1]) for i in FIG4_INDICES
                                      if i <= len(ssl.eigenvalues)}

        elif figure == 'fig5':
            _, ssl = self.family_pq(block=0)
            chosen = [i for i in FIG5_INDICES if i <= len(ssl.eigenvalues)]
            size = 1 << rc.n_cube
            header = ['block'] + [f"psi{i}_abs" for i in chosen]
            names.append('fig5_samples.csv')
            self.writer.write_csv(names[-1], header,
                                  ([k] + [abs(ssl.vectors[k * size, i - 1]) for i in chosen]
                                   for k in range(rc.m_cycle)))
            self.writer.write_csv('fig5_samples_all.csv',
                                  ['eigen_index', 'cube_vertex', 'block', 're', 'im'],
                                  ((i, v, k, ssl.vectors[k * size + v, i - 1].real,
                                    ssl.vectors[k * size + v, i - 1].imag)
                                   for i in chosen for v in range(size) for k in range(rc.m_cycle)))
            summary['eigenvalues'] = {i: float(ssl.eigenvalues[i - 1]) for i in chosen}

        elif figure == 'fig7':
            cartesian = cartesian_eigenvalues(rc.n_cube, rc.m_cycle)
            substitution = substitution_eigenvalues(rc.n_cube, rc.m_cycle,
                                                    eigen_config=self.config.eigen)
            count = min(FIG2_RANKS, len(cartesian))
            names.append('fig7_eigenvalues.csv')
            self.writer.write_csv(names[-1], ['rank', 'cartesian', 'substitution'],
                                  ((i + 1, cartesian[i], substitution[i]) for i in range(count)))

            _, cartesian_ssl = self._cartesian_pq(0)
            _, substitution_ssl = substitution_pq(rc.n_cube, rc.k_level, rc.m_cycle, tol=rc.tol,
                                                  eigen_config=self.config.eigen,
                                                  pw_tol=self.config.spectral.pw_tol)
            length = max(len(cartesian_ssl.eigenvalues), len(substitution_ssl.eigenvalues))
            padded = [np.pad(s.eigenvalues, (0, length - len(s.eigenvalues)))
                      for s in (cartesian_ssl, substitution_ssl)]
            names.append('fig7_pq_overlay.csv')
            self.writer.write_csv(names[-1], ['index', 'cartesian_pq', 'substitution_pq'],
                                  ((i + 1, padded[0][i], padded[1][i]) for i in range(length)))
            summary['ranks'] = count

        elif figure == 'fig8':
            pw, ssl = self._cartesian_pq(0)
            # 예측 스펙트럼의 각 고유값 묶음에서 첫 고유벡터
            starts, position = [], 1
            for _, mult in cartesian_pq_spectrum(rc.n_cube, rc.m_cycle, rc.k_level):
                starts.append(position)
                position += mult
            names.extend(self._traces(ssl, pw, starts, figure))
            summary['indices'] = starts
            summary['eigenvalues'] = [float(ssl.eigenvalues[i - 1]) for i in starts]

        self.writer.write_plot_script(figure, names)
        summary['files'] = names
        return summary

    # ------------------------------------------------------------------
    # 실행
    # ------------------------------------------------------------------

    def run(self, command: str) -> Dict:
        """명령 실행 후 결과 요약 반환"""
        self.stats['start_time'] = time.time()
        handlers = {
            'spectrum': self.run_spectrum,
            'pq': self.run_pq,
            'conjecture': self.run_conjecture,
            'frame': self.run_frame,
            'pesenson': self.run_pesenson,
            'cartesian': self.run_cartesian,
            'abelian': self.run_abelian,
            'dims': self.run_dims,
        }
        self.logger.info(f"명령 시작 - {command}, family={self.run_config.family}")
        if command == 'figure':
            return self.emit_figure_data(self.run_config.extra.get('figure'))
        if command not in handlers:
            raise ValidationError(f"알 수 없는 명령: {command}")
        return handlers[command]()

    def record_run(self, command: str, status: str, exit_code: int, summary: Optional[Dict]):
        """실행 기록 DB 저장 (실패해도 명령 결과에는 영향 없음)"""
        if self.database is None:
            return
        record = RunRecord.from_run(command, self.run_config, status, exit_code, summary, __version__)
        row_id = self.database.insert_run(record)
        if row_id is None:
            self.stats['errors'] += 1

    def print_stats(self):
        """실행 통계 출력"""
        stats = self.writer.get_statistics()
        elapsed = time.time() - self.stats['start_time'] if self.stats['start_time'] else 0.0
        self.logger.info("=== 실행 통계 ===")
        self.logger.info(f"소요 시간: {elapsed:.2f}초")
        self.logger.info(f"CSV 저장: {stats['csv_saves']}, JSON 저장: {stats['json_saves']}, "
                         f"행렬 저장: {stats['matrix_saves']}")
        self.logger.info(f"오류: 저장 {stats['errors']}, 기록 {self.stats['errors']}")


# ----------------------------------------------------------------------
# CLI
# ----------------------------------------------------------------------

def common_options(with_family: bool = True):
    """모든 계산 명령이 공유하는 옵션"""
    def decorator(func):
        options = [
            click.option('--n', 'n_cube', type=int, default=None, help='큐브 차원 N'),
            click.option('--m', 'm_cycle', type=int, default=None, help='사이클 길이 m'),
            click.option('--k', 'k_level', type=int, default=None, help='대역 단계 K (Ω = 2K)'),
            click.option('--omega', type=float, default=None, help='대역 한계 Ω (기본 2K)'),
            click.option('--block', type=int, default=0, show_default=True, help='마스크 블록 번호'),
            click.option('--tol', type=float, default=1e-8, show_default=True,
                         help='고유값 1 판정 허용오차'),
            click.option('--seed', type=int, default=None, help='난수 시드'),
            click.option('--out', 'output_dir', default=None, help='출력 디렉터리'),
            click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS),
                         default=None, help='표 출력 형식'),
            click.option('--trials', type=int, default=100, show_default=True, help='무작위 시행 수'),
        ]
        if with_family:
            options.insert(0, click.option('--family', type=click.Choice(FAMILIES),
                                           default='substitution', show_default=True))
        for option in reversed(options):
            func = option(func)
        return func
    return decorator


def _execute(ctx: click.Context, command: str, family: str = 'substitution', **options):
    config: AppConfig = ctx.obj
    logger = logging.getLogger(__name__)
    runner = None
    summary = None
    exit_code = 0
    status = 'ok'

    output_dir = options.pop('output_dir') or config.output.output_dir
    output_format = options.pop('output_format') or config.output.output_format
    seed = options.pop('seed')
    seed = config.default_seed if seed is None else seed

    try:
        run_config = build_run_config(
            command, family,
            options.pop('n_cube', None), options.pop('m_cycle', None), options.pop('k_level', None),
            options.pop('omega', None), options.pop('block', 0), options.pop('tol', 1e-8),
            output_dir, output_format, seed, **options)
        runner = ToolkitRunner(config, run_config)
        summary = runner.run(command)
        click.echo(json.dumps(to_builtin(summary), ensure_ascii=False, indent=2, sort_keys=True))
    except ValidationError as e:
        logger.error(f"입력 오류: {e}")
        click.echo(f"오류: {e}", err=True)
        exit_code, status = 2, 'invalid'
    except ConvergenceError as e:
        logger.error(f"고유값 반복 미수렴: {e} {e.diagnostics()}")
        click.echo(f"미수렴: {e}", err=True)
        exit_code, status = 3, 'no_convergence'
        summary = e.diagnostics()

    if runner is not None:
        runner.record_run(command, status, exit_code, summary)
        runner.print_stats()
    if exit_code:
        ctx.exit(exit_code)


@click.group()
@click.option('--log-level', default=None, help='로그 레벨 (기본 LOG_LEVEL 환경 변수)')
@click.option('--no-log-file', is_flag=True, help='로그 파일 기록 끄기')
@click.version_option(__version__)
@click.pass_context
def main(ctx, log_level, no_log_file):
    """큐브-사이클 그래프 공간-스펙트럼 제한 툴킷"""
    try:
        config = load_config_from_env()
    except ValueError as e:
        click.echo(f"설정 오류: {e}", err=True)
        ctx.exit(2)
        return
    if log_level:
        config.logging.log_level = log_level.upper()
    if no_log_file:
        config.logging.log_file = ""
    setup_logging(config.logging)
    ctx.obj = config


@main.command()
@common_options()
@click.option('--edges', default=None, help='custom 그래프 간선 목록 파일')
@click.pass_context
def spectrum(ctx, **options):
    """라플라시안 스펙트럼과 그래프 파일 저장"""
    _execute(ctx, 'spectrum', **options)


@main.command()
@common_options()
@click.option('--edges', default=None, help='custom 그래프 간선 목록 파일')
@click.option('--mask', default=None, help='custom 마스크 정점 목록 (JSON 또는 파일)')
@click.option('--vectors', type=int, default=0, show_default=True, help='저장할 PQ 고유벡터 수')
@click.pass_context
def pq(ctx, **options):
    """마스크 PQ 고유분해"""
    _execute(ctx, 'pq', **options)


@main.command()
@common_options()
@click.pass_context
def conjecture(ctx, **options):
    """블록 0 PQ 고유값 개수, 시프트 랭크, 집중도 부등식 검사"""
    _execute(ctx, 'conjecture', **options)


@main.command()
@common_options()
@click.pass_context
def frame(ctx, **options):
    """순환 시프트 시스템의 프레임 상하한"""
    _execute(ctx, 'frame', **options)


@main.command()
@common_options()
@click.option('--edges', default=None, help='custom 그래프 간선 목록 파일')
@click.option('--partition', default=None, help='정점 분할 (JSON 또는 파일)')
@click.option('--epsilon', type=float, default=None, help='ε (기본 최적값)')
@click.pass_context
def pesenson(ctx, **options):
    """클러스터 평균 샘플링 하한 검사"""
    _execute(ctx, 'pesenson', **options)


@main.command()
@common_options(with_family=False)
@click.pass_context
def cartesian(ctx, **options):
    """B_N □ C_m 의 PW 세 성분 분해 검사"""
    _execute(ctx, 'cartesian', family='cartesian', **options)


@main.command()
@common_options(with_family=False)
@click.option('--group', required=True, help='군 지정 (예: 4x5)')
@click.option('--subsets', default=None, help='{"S": [...], "Sigma": [...]} (JSON 또는 파일)')
@click.pass_context
def abelian(ctx, **options):
    """유한 아벨 군 스펙트럼 누적 항등식"""
    _execute(ctx, 'abelian', family='abelian', **options)


@main.command()
@common_options()
@click.pass_context
def dims(ctx, **options):
    """PW 공간 차원 공식 검사"""
    _execute(ctx, 'dims', **options)


@main.command()
@common_options(with_family=False)
@click.option('--figure', 'figure', type=click.Choice(FIGURES), required=True)
@click.pass_context
def figure(ctx, **options):
    """그림 데이터 CSV 와 플롯 스크립트 생성"""
    family = 'cartesian' if options['figure'] in ('fig7', 'fig8') else 'substitution'
    _execute(ctx, 'figure', family=family, **options)


@main.command()
@click.option('--limit', type=int, default=10, show_default=True)
@click.option('--command', 'command_name', default=None, help='명령별 조회')
@click.pass_context
def history(ctx, limit, command_name):
    """최근 실행 기록 조회"""
    config: AppConfig = ctx.obj
    database = ResultsDatabase(config.database.db_path)
    records = (database.get_runs_by_command(command_name, limit) if command_name
               else database.get_recent_runs(limit))
    for record in records:
        click.echo(f"{record.timestamp} {record}")
    click.echo(json.dumps(database.get_statistics(), ensure_ascii=False, sort_keys=True))


if __name__ == "__main__":
    main()
