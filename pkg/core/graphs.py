"""
그래프 구성 모듈
사이클, 불리언 큐브, 곱 그래프, 정점 치환 그래프와 라플라시안 생성
"""
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from core.errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """정렬된 이웃 리스트로 저장하는 단순 무방향 그래프"""
    n: int
    neighbors: Tuple[Tuple[int, ...], ...]
    label_map: Optional[Dict[Hashable, int]] = field(default=None, compare=False, repr=False)
    name: str = ""
    # induced_subgraph 결과에서 원래 그래프의 정점 번호
    parent_indices: Optional[Tuple[int, ...]] = field(default=None, compare=False, repr=False)
    # 유도 부분 그래프가 둘 이상의 연결 성분으로 나뉘었는지
    disconnected: bool = field(default=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], name: str = "",
                   label_map: Optional[Dict[Hashable, int]] = None,
                   parent_indices: Optional[Tuple[int, ...]] = None) -> 'Graph':
        """간선 목록에서 그래프 생성 (자기 루프 / 중복 간선 거부)"""
        if n < 1:
            raise ValidationError(f"정점 수는 1 이상이어야 합니다: {n}")

        adjacency: List[set] = [set() for _ in range(n)]
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"정점 번호 범위 초과: ({i}, {j}), n={n}")
            if i == j:
                raise ValidationError(f"자기 루프는 허용되지 않습니다: {i}")
            if j in adjacency[i]:
                raise ValidationError(f"중복 간선: ({i}, {j})")
            adjacency[i].add(j)
            adjacency[j].add(i)

        neighbors = tuple(tuple(sorted(a)) for a in adjacency)
        return cls(n=n, neighbors=neighbors, label_map=label_map, name=name,
                   parent_indices=parent_indices)

    def edges(self) -> List[Tuple[int, int]]:
        """i < j 인 간선 목록"""
        return [(i, j) for i in range(self.n) for j in self.neighbors[i] if i < j]

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def degree(self, vertex: int) -> int:
        return len(self.neighbors[vertex])

    def degrees(self) -> np.ndarray:
        return np.array([len(nb) for nb in self.neighbors], dtype=int)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, nb in enumerate(self.neighbors):
            a[i, list(nb)] = 1.0
        return a

    def index_of(self, label: Hashable) -> int:
        if self.label_map is None:
            raise ValidationError(f"{self.name or 'graph'}: 레이블 정보가 없습니다")
        return self.label_map[label]

    @cached_property
    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        edges = self.edges()
        if not edges:
            return False
        rows, cols = zip(*edges)
        sparse = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n))
        n_components, _ = connected_components(sparse, directed=False)
        return n_components == 1

    def __str__(self) -> str:
        return f"Graph({self.name or 'custom'}, n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class SymmetricMatrix:
    """에르미트 대칭화된 조밀 행렬"""
    data: np.ndarray
    hermitian: bool = True

    @classmethod
    def from_array(cls, array) -> 'SymmetricMatrix':
        a = np.asarray(array)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"정방 행렬이 아닙니다: shape={a.shape}")
        if np.iscomplexobj(a):
            sym = (a + a.conj().T) / 2
        else:
            a = a.astype(float)
            sym = (a + a.T) / 2
        return cls(data=sym, hermitian=True)

    @property
    def order(self) -> int:
        return self.data.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.data)


def cycle_graph(m: int) -> Graph:
    """사이클 C_m (ℓ ~ ℓ±1 mod m)"""
    if m < 3:
        raise ValidationError(f"사이클 길이는 3 이상이어야 합니다: m={m}")
    edges = [(ell, (ell + 1) % m) for ell in range(m)]
    return Graph.from_edges(m, edges, name=f"C_{m}")


def cube_graph(n_cube: int) -> Graph:
    """불리언 큐브 B_N (사전식 비트열 순서, 인덱스 = Σ ε_i 2^{N-i})"""
    if n_cube < 1:
        raise ValidationError(f"큐브 차원은 1 이상이어야 합니다: N={n_cube}")
    size = 1 << n_cube
    edges = [(v, v ^ (1 << bit)) for v in range(size) for bit in range(n_cube)
             if v < v ^ (1 << bit)]
    label_map = {cube_label(n_cube, v): v for v in range(size)}
    return Graph.from_edges(size, edges, name=f"B_{n_cube}", label_map=label_map)


def cube_label(n_cube: int, index: int) -> Tuple[int, ...]:
    """큐브 정점 인덱스 -> 비트열 (ε_1, ..., ε_N)"""
    return tuple((index >> (n_cube - 1 - i)) & 1 for i in range(n_cube))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """곱 그래프 G □ H, 정점 (g, h) -> h·|G| + g (슬라이스 우선)"""
    if not (g.is_connected and h.is_connected):
        raise ValidationError("곱 그래프의 두 인자는 연결 그래프여야 합니다")

    edges = []
    for slice_index in range(h.n):
        offset = slice_index * g.n
        edges.extend((offset + i, offset + j) for i, j in g.edges())
    for i, j in h.edges():
        edges.extend((i * g.n + u, j * g.n + u) for u in range(g.n))

    label_map = {(u, slice_index): slice_index * g.n + u
                 for slice_index in range(h.n) for u in range(g.n)}
    product = Graph.from_edges(g.n * h.n, edges, name=f"{g.name}x{h.name}", label_map=label_map)
    logger.debug(f"곱 그래프 생성: {product}")
    return product


def vertex_substitution(n_cube: int, m: int) -> Graph:
    """정점 치환 그래프 B_N ⊢ C_m (블록 우선, v_1^{k-1} ~ v_0^k)"""
    if n_cube < 1:
        raise ValidationError(f"큐브 차원은 1 이상이어야 합니다: N={n_cube}")
    if m < 3:
        raise ValidationError(f"사이클 길이는 3 이상이어야 합니다: m={m}")

    cube = cube_graph(n_cube)
    size = cube.n
    edges = []
    for block in range(m):
        offset = block * size
        edges.extend((offset + i, offset + j) for i, j in cube.edges())
        edges.append((offset + size - 1, ((block + 1) % m) * size))

    label_map = {(block, v): block * size + v for block in range(m) for v in range(size)}
    graph = Graph.from_edges(m * size, edges, name=f"B_{n_cube}|-C_{m}", label_map=label_map)
    logger.debug(f"정점 치환 그래프 생성: {graph}")
    return graph


def laplacian(graph: Graph) -> SymmetricMatrix:
    """비정규화 라플라시안 L = D - A"""
    a = graph.adjacency_matrix()
    return SymmetricMatrix(data=np.diag(a.sum(axis=1)) - a, hermitian=True)


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> Graph:
    """정점 집합의 유도 부분 그래프 (인덱스는 조밀하게 재배열)"""
    chosen = sorted(set(int(v) for v in vertices))
    if not chosen:
        raise ValidationError("유도 부분 그래프의 정점 집합이 비어 있습니다")
    if chosen[0] < 0 or chosen[-1] >= graph.n:
        raise ValidationError(f"정점 번호 범위 초과 (n={graph.n})")

    position = {v: i for i, v in enumerate(chosen)}
    edges = [(position[i], position[j]) for i in chosen for j in graph.neighbors[i]
             if j in position and i < j]
    sub = Graph.from_edges(len(chosen), edges, name=f"{graph.name}[{len(chosen)}]",
                           parent_indices=tuple(chosen))
    if not sub.is_connected:
        logger.warning(f"유도 부분 그래프가 연결되어 있지 않습니다: {sub}")
        sub = replace(sub, disconnected=True)
    return sub


def validate_partition(graph: Graph, partition: Sequence[Iterable[int]]) -> List[List[int]]:
    clusters = [sorted(int(v) for v in cluster) for cluster in partition]
    if any(not cluster for cluster in clusters):
        raise ValidationError("분할에 빈 클러스터가 있습니다")
    flat = [v for cluster in clusters for v in cluster]
    if len(flat) != graph.n or set(flat) != set(range(graph.n)):
        raise ValidationError(f"분할이 정점 집합을 서로소로 덮지 않습니다 (n={graph.n})")
    return clusters


def clusterness_ratio(graph: Graph, partition: Sequence[Iterable[int]]) -> Fraction:
    """클러스터 내부 평균 차수 / 전체 평균 차수"""
    clusters = validate_partition(graph, partition)
    owner = np.empty(graph.n, dtype=int)
    for index, cluster in enumerate(clusters):
        owner[cluster] = index

    intra = sum(1 for i in range(graph.n) for j in graph.neighbors[i] if owner[i] == owner[j])
    total = sum(len(nb) for nb in graph.neighbors)
    if total == 0:
        raise ValidationError("간선이 없는 그래프의 클러스터 비율은 정의되지 않습니다")
    return Fraction(intra, total)


def block_partition(n_cube: int, m: int) -> List[List[int]]:
    """블록(슬라이스) k = [k·2^N, (k+1)·2^N) 분할"""
    size = 1 << n_cube
    return [list(range(k * size, (k + 1) * size)) for k in range(m)]
