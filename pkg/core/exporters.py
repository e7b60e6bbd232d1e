"""
산출물 저장 모듈
CSV / JSON 결과 파일과 메타데이터 사이드카, 간선 목록, Matrix Market, 플롯 스크립트 저장
"""
import csv
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import scipy.io
import scipy.sparse

from core.graphs import Graph, laplacian
from models import to_builtin

_PLOT_TEMPLATE = '''"""{figure} 데이터 플롯 (자동 생성)"""
import csv
import matplotlib.pyplot as plt


def load(name):
    with open(name, newline='', encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    return rows


for name in {csv_names!r}:
    rows = load(name)
    columns = list(rows[0].keys())
    x = [float(r[columns[0]]) for r in rows]
    for column in columns[1:]:
        plt.plot(x, [float(r[column]) for r in rows], '.', label=f"{{name}}:{{column}}")

plt.legend()
plt.title({figure!r})
plt.show()
'''


class ArtifactWriter:
    def __init__(self, output_dir: str = "results", digits: int = 15,
                 version: str = "", config_echo: Optional[Dict] = None):
        self.logger = logging.getLogger(__name__)
        self.output_dir = Path(output_dir)
        self.digits = digits
        self.version = version
        self.config_echo = config_echo or {}
        self.written: List[Path] = []

        # 통계 정보
        self.stats = {
            'csv_saves': 0,
            'json_saves': 0,
            'matrix_saves': 0,
            'errors': 0
        }

    def _format(self, value) -> str:
        if isinstance(value, (bool, np.bool_)):
            return str(bool(value)).lower()
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return f"{float(value):.{self.digits}g}"
        return str(value)

    def _path(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def _write_sidecar(self, path: Path, rows: Optional[int] = None, extra: Optional[Dict] = None):
        meta = {
            'file': path.name,
            'toolkit_version': self.version,
            'config': to_builtin(self.config_echo),
        }
        if rows is not None:
            meta['rows'] = rows
        if extra:
            meta.update(to_builtin(extra))
        sidecar = path.with_name(path.name + '.meta.json')
        with open(sidecar, 'w', encoding='utf-8') as f:
            json.dump(meta, f, ensure_ascii=False, indent=2, sort_keys=True)

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Optional[Path]:
        """헤더와 행을 CSV 로 저장 (유효숫자 고정)"""
        path = self._path(name)
        try:
            count = 0
            with open(path, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(header)
                for row in rows:
                    writer.writerow([self._format(v) for v in row])
                    count += 1
            self._write_sidecar(path, rows=count)
            self.stats['csv_saves'] += 1
            self.written.append(path)
            self.logger.debug(f"CSV 저장 완료 - {path} ({count}행)")
            return path
        except Exception as e:
            self.stats['errors'] += 1
            self.logger.error(f"CSV 저장 오류: {path} - {e}", exc_info=True)
            return None

    def write_json(self, name: str, payload) -> Optional[Path]:
        """결과 객체를 JSON 으로 저장"""
        path = self._path(name)
        try:
            data = payload.to_dict() if hasattr(payload, 'to_dict') else payload
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(to_builtin(data), f, ensure_ascii=False, indent=2, sort_keys=True)
            self._write_sidecar(path)
            self.stats['json_saves'] += 1
            self.written.append(path)
            self.logger.debug(f"JSON 저장 완료 - {path}")
            return path
        except Exception as e:
            self.stats['errors'] += 1
            self.logger.error(f"JSON 저장 오류: {path} - {e}", exc_info=True)
            return None

    def write_edge_list(self, graph: Graph, name: Optional[str] = None) -> Optional[Path]:
        """한 줄에 'i j' (0 기반, i < j)"""
        path = self._path(name or f"{graph.name or 'graph'}.edges".replace('|-', '_sub_'))
        try:
            with open(path, 'w', encoding='utf-8') as f:
                for i, j in graph.edges():
                    f.write(f"{i} {j}\n")
            self._write_sidecar(path, rows=graph.edge_count, extra={'vertices': graph.n})
            self.written.append(path)
            return path
        except Exception as e:
            self.stats['errors'] += 1
            self.logger.error(f"간선 목록 저장 오류: {path} - {e}", exc_info=True)
            return None

    def write_matrix_mm(self, matrix: np.ndarray, name: str, symmetric: bool = False) -> Optional[Path]:
        """Matrix Market 저장 (symmetric 이면 대칭 좌표 형식)"""
        path = self._path(name if name.endswith('.mtx') else f"{name}.mtx")
        try:
            # 대칭 형식은 하삼각만 기록
            data = scipy.sparse.tril(scipy.sparse.coo_matrix(matrix)).tocoo() if symmetric \
                else np.asarray(matrix)
            scipy.io.mmwrite(str(path), data, symmetry='symmetric' if symmetric else 'general',
                             precision=self.digits)
            self._write_sidecar(path)
            self.stats['matrix_saves'] += 1
            self.written.append(path)
            return path
        except Exception as e:
            self.stats['errors'] += 1
            self.logger.error(f"Matrix Market 저장 오류: {path} - {e}", exc_info=True)
            return None

    def write_laplacian_mm(self, graph: Graph, name: Optional[str] = None) -> Optional[Path]:
        return self.write_matrix_mm(laplacian(graph).data,
                                    name or f"{graph.name or 'graph'}_laplacian.mtx".replace('|-', '_sub_'),
                                    symmetric=True)

    def read_matrix_mm(self, path) -> np.ndarray:
        """Matrix Market 파일을 조밀 행렬로 읽기"""
        matrix = scipy.io.mmread(str(path))
        return matrix.toarray() if scipy.sparse.issparse(matrix) else np.asarray(matrix)

    def write_decomposition(self, values: np.ndarray, vectors: np.ndarray, name: str) -> List[Path]:
        """고유값 CSV (index, eigenvalue) 와 고유벡터 CSV (vertex, vector, re, im)"""
        paths = [self.write_csv(f"{name}_values.csv", ['index', 'eigenvalue'],
                                ((i, float(v)) for i, v in enumerate(values)))]
        paths.append(self.write_csv(
            f"{name}_vectors.csv", ['vertex', 'vector', 're', 'im'],
            ((i, j, vectors[i, j].real, vectors[i, j].imag)
             for j in range(vectors.shape[1]) for i in range(vectors.shape[0]))))
        return [p for p in paths if p is not None]

    def write_basis(self, vectors: np.ndarray, manifest: List[Dict], name: str) -> List[Path]:
        """기저 행렬 CSV (행 = 정점, 열 = 기저 벡터 re/im) 와 JSON 매니페스트"""
        header = ['vertex'] + [f"{part}{j}" for j in range(vectors.shape[1]) for part in ('re', 'im')]
        rows = ([i] + [x for j in range(vectors.shape[1]) for x in (vectors[i, j].real, vectors[i, j].imag)]
                for i in range(vectors.shape[0]))
        paths = [self.write_csv(f"{name}.csv", header, rows),
                 self.write_json(f"{name}_manifest.json", {'columns': manifest})]
        return [p for p in paths if p is not None]

    def write_plot_script(self, figure: str, csv_names: Sequence[str]) -> Optional[Path]:
        """matplotlib 플롯 스크립트 골격 (실행하지 않음)"""
        path = self._path(f"plot_{figure}.py")
        try:
            path.write_text(_PLOT_TEMPLATE.format(figure=figure, csv_names=list(csv_names)),
                            encoding='utf-8')
            self.written.append(path)
            return path
        except Exception as e:
            self.stats['errors'] += 1
            self.logger.error(f"플롯 스크립트 저장 오류: {path} - {e}", exc_info=True)
            return None

    def get_statistics(self) -> Dict:
        return self.stats.copy()
