"""
CLI 입력 파싱 모듈
군 지정 문자열, 부분집합/분할 JSON, 간선 목록 파일을 도메인 객체로 변환
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from core.abelian import AbelianGroup, SymmetricSubset
from core.errors import ValidationError
from core.graphs import Graph


class InputParser:
    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def parse_group_spec(self, spec: str) -> AbelianGroup:
        """'m1xm2x...' 문자열을 AbelianGroup 으로 변환"""
        try:
            factors = tuple(int(part) for part in spec.lower().replace('z', '').split('x') if part.strip())
        except ValueError as e:
            self.logger.error(f"군 지정 파싱 오류: {spec!r} - {e}")
            raise ValidationError(f"잘못된 군 지정: {spec!r} (예: 4x5)") from e
        if not factors:
            raise ValidationError(f"잘못된 군 지정: {spec!r} (예: 4x5)")
        return AbelianGroup(factors)

    def load_json(self, source: Union[str, Path]) -> Dict:
        """파일 경로 또는 JSON 문자열을 파싱"""
        text = str(source)
        path = Path(text)
        try:
            if not text.lstrip().startswith(('{', '[')) and path.exists():
                text = path.read_text(encoding='utf-8')
            return json.loads(text)
        except json.JSONDecodeError as e:
            self.logger.error(f"JSON 파싱 오류: {e} - 입력: {text[:200]!r}")
            raise ValidationError(f"JSON 파싱 오류: {e}") from e
        except OSError as e:
            self.logger.error(f"입력 파일 읽기 오류: {e}")
            raise ValidationError(f"입력 파일을 읽을 수 없습니다: {source}") from e

    def parse_subsets(self, group: AbelianGroup,
                      source: Union[str, Path]) -> Tuple[SymmetricSubset, SymmetricSubset]:
        """{"S": [...], "Sigma": [...]} 를 (S, Σ) 로 변환 (단일 인수 군은 정수 원소 허용)"""
        payload = self.load_json(source)
        if not isinstance(payload, dict) or 'S' not in payload or 'Sigma' not in payload:
            raise ValidationError("부분집합 JSON 에는 'S' 와 'Sigma' 키가 필요합니다")

        subsets = []
        for key in ('S', 'Sigma'):
            elements = payload[key]
            if not isinstance(elements, list) or not elements:
                raise ValidationError(f"'{key}' 는 비어 있지 않은 원소 목록이어야 합니다")
            for element in elements:
                if isinstance(element, list) and len(element) != len(group.factors):
                    raise ValidationError(f"'{key}' 원소 {element} 의 길이가 군 {group} 과 맞지 않습니다")
                if isinstance(element, int) and len(group.factors) != 1:
                    raise ValidationError(f"다중 인수 군 {group} 에서는 원소를 목록으로 지정해야 합니다")
            subsets.append(SymmetricSubset.from_elements(group, elements))
        self.logger.debug(f"부분집합 파싱 완료 - |S|={len(subsets[0])}, |Σ|={len(subsets[1])}")
        return subsets[0], subsets[1]

    def parse_partition(self, source: Union[str, Path], n: int) -> List[List[int]]:
        """[[i, ...], ...] 형태의 정점 분할"""
        payload = self.load_json(source)
        if isinstance(payload, dict):
            payload = payload.get('partition')
        if not isinstance(payload, list) or not all(isinstance(c, list) for c in payload):
            raise ValidationError("분할 JSON 은 정점 번호 목록의 목록이어야 합니다")
        flat = [v for cluster in payload for v in cluster]
        if sorted(flat) != list(range(n)):
            raise ValidationError(f"분할이 정점 0..{n - 1} 을 서로소로 덮지 않습니다")
        return [sorted(int(v) for v in cluster) for cluster in payload]

    def read_edge_list(self, path: Union[str, Path], name: Optional[str] = None) -> Graph:
        """'i j' 한 줄당 간선 하나 (0 기반, # 주석 허용)"""
        edges = []
        try:
            with open(path, 'r', encoding='utf-8') as f:
                for line_no, line in enumerate(f, start=1):
                    stripped = line.split('#', 1)[0].strip()
                    if not stripped:
                        continue
                    parts = stripped.split()
                    if len(parts) != 2:
                        raise ValidationError(f"{path}:{line_no}: 'i j' 형식이 아닙니다: {line.strip()!r}")
                    edges.append((int(parts[0]), int(parts[1])))
        except OSError as e:
            self.logger.error(f"간선 목록 읽기 오류: {e}")
            raise ValidationError(f"간선 목록 파일을 읽을 수 없습니다: {path}") from e
        except ValueError as e:
            if isinstance(e, ValidationError):
                raise
            raise ValidationError(f"간선 목록 정수 변환 오류: {e}") from e

        if not edges:
            raise ValidationError(f"간선 목록이 비어 있습니다: {path}")
        n = max(max(i, j) for i, j in edges) + 1
        graph = Graph.from_edges(n, edges, name=name or Path(path).stem)
        self.logger.info(f"간선 목록 로드 완료: {graph}")
        return graph
