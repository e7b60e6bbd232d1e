"""
그래프 푸리에 변환, Paley-Wiener 공간, 공간-스펙트럼 제한(PQ) 연산
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from core.dense_eigen import EigenDecomposition, eigh, group_eigenvalues
from core.errors import ValidationError
from core.graphs import Graph, SymmetricMatrix, laplacian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Spectrum:
    """그래프와 라플라시안 고유분해, 고유값 클러스터"""
    graph: Graph
    decomposition: EigenDecomposition
    clusters: Tuple[Tuple[float, int], ...]

    @property
    def values(self) -> np.ndarray:
        return self.decomposition.values

    @property
    def vectors(self) -> np.ndarray:
        return self.decomposition.vectors


@dataclass(frozen=True)
class PaleyWienerSpace:
    """고유값 omega 이하 고유벡터가 생성하는 공간 (정규직교 기저)"""
    omega: float
    basis: np.ndarray
    eigenvalues: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def project(self, f: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.conj().T @ f)

    def random_element(self, rng: np.random.Generator, normalize: bool = True) -> np.ndarray:
        """부분공간 좌표의 표준 가우시안으로 만든 무작위 원소"""
        coords = rng.standard_normal(self.dimension)
        if np.iscomplexobj(self.basis):
            coords = coords + 1j * rng.standard_normal(self.dimension)
        f = self.basis @ coords
        return f / np.linalg.norm(f) if normalize else f


@dataclass(frozen=True)
class SpatialMask:
    """정점 부분집합 S (여집합은 암묵적)"""
    indices: Tuple[int, ...]
    n: int

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> 'SpatialMask':
        chosen = tuple(sorted(set(int(i) for i in indices)))
        if not chosen:
            raise ValidationError("공간 마스크가 비어 있습니다")
        if chosen[0] < 0 or chosen[-1] >= n:
            raise ValidationError(f"마스크 정점 번호 범위 초과 (n={n})")
        return cls(indices=chosen, n=n)

    @classmethod
    def block(cls, n_cube: int, m: int, block: int) -> 'SpatialMask':
        """블록(슬라이스) k 마스크"""
        if not 0 <= block < m:
            raise ValidationError(f"블록 번호 범위 초과: {block} (m={m})")
        size = 1 << n_cube
        return cls(indices=tuple(range(block * size, (block + 1) * size)), n=m * size)

    def as_vector(self) -> np.ndarray:
        q = np.zeros(self.n)
        q[list(self.indices)] = 1.0
        return q

    def apply(self, f: np.ndarray) -> np.ndarray:
        """Q f (마스크 밖을 0으로)"""
        out = np.zeros_like(f)
        idx = list(self.indices)
        out[idx] = f[idx]
        return out


@dataclass(frozen=True)
class SSLReport:
    """PQ 고유쌍 (내림차순)과 개수 집계"""
    eigenvalues: np.ndarray
    vectors: np.ndarray
    coordinates: np.ndarray
    count_one: int
    count_mid: int
    count_small: int
    one_tol: float
    mask: SpatialMask

    @property
    def above_half(self) -> np.ndarray:
        """고유값 > 1/2 인 고유벡터"""
        return self.vectors[:, :self.count_one + self.count_mid]

    @property
    def mid_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.count_one:self.count_one + self.count_mid]


def graph_fourier(graph: Graph, cluster_tol: float = 1e-9, eigen_config=None) -> Spectrum:
    """라플라시안 고유분해 (고유값 오름차순 열 배치)"""
    if not graph.is_connected:
        raise ValidationError(f"연결 그래프가 아닙니다: {graph}")
    if eigen_config is not None:
        cluster_tol = eigen_config.cluster_tol
    decomposition = eigh(laplacian(graph), cluster_tol=cluster_tol, eigen_config=eigen_config)
    clusters = tuple(group_eigenvalues(decomposition.values, cluster_tol))
    logger.info(f"그래프 푸리에 변환 완료 - {graph}, 서로 다른 고유값 {len(clusters)}개")
    return Spectrum(graph=graph, decomposition=decomposition, clusters=clusters)


def pw_space(spectrum: Spectrum, omega: float, tol: float = 1e-9) -> PaleyWienerSpace:
    """대표값이 omega + tol 이하인 클러스터로 PW_omega 구성"""
    if omega < 0:
        raise ValidationError(f"omega는 0 이상이어야 합니다: {omega}")
    dimension = sum(mult for value, mult in spectrum.clusters if value <= omega + tol)
    pw = PaleyWienerSpace(omega=float(omega), basis=spectrum.vectors[:, :dimension],
                          eigenvalues=spectrum.values[:dimension])
    logger.info(f"PW 공간 구성 - omega={omega}, 차원={dimension}")
    return pw


def pw_from_eigenpairs(values: np.ndarray, vectors: np.ndarray, omega: float,
                       tol: float = 1e-9) -> PaleyWienerSpace:
    """해석적 고유기저에서 PW 공간 구성 (값 정렬 불필요)"""
    if omega < 0:
        raise ValidationError(f"omega는 0 이상이어야 합니다: {omega}")
    keep = np.flatnonzero(np.asarray(values) <= omega + tol)
    order = keep[np.argsort(np.asarray(values)[keep], kind="stable")]
    return PaleyWienerSpace(omega=float(omega), basis=vectors[:, order],
                            eigenvalues=np.asarray(values)[order])


def ssl_eigen(pw: PaleyWienerSpace, mask: SpatialMask, one_tol: float = 1e-8,
              eigen_config=None) -> SSLReport:
    """
    PQ 의 0이 아닌 스펙트럼을 B* Q B 압축으로 계산

    Returns:
        SSLReport (고유값 내림차순, 고유벡터 B w)
    """
    if mask.n != pw.n:
        raise ValidationError(f"마스크 크기 불일치: mask.n={mask.n}, pw.n={pw.n}")
    restricted = pw.basis[list(mask.indices), :]
    compression = SymmetricMatrix.from_array(restricted.conj().T @ restricted)
    decomposition = eigh(compression, eigen_config=eigen_config)

    eigenvalues = decomposition.values[::-1].copy()
    coordinates = decomposition.vectors[:, ::-1].copy()
    vectors = pw.basis @ coordinates

    count_one = int(np.sum(eigenvalues >= 1.0 - one_tol))
    count_mid = int(np.sum((eigenvalues > 0.5 + one_tol) & (eigenvalues < 1.0 - one_tol)))
    count_small = len(eigenvalues) - count_one - count_mid

    logger.info(f"PQ 고유분해 완료 - 1: {count_one}개, (1/2,1): {count_mid}개, "
                f"≤1/2: {count_small}개")
    return SSLReport(eigenvalues=eigenvalues, vectors=vectors, coordinates=coordinates,
                     count_one=count_one, count_mid=count_mid, count_small=count_small,
                     one_tol=one_tol, mask=mask)


def concentration(f: np.ndarray, mask: SpatialMask) -> float:
    """‖Q f‖² / ‖f‖²"""
    f = np.asarray(f)
    total = np.vdot(f, f).real
    if total == 0.0:
        raise ValidationError("영벡터의 집중도는 정의되지 않습니다")
    inside = f[list(mask.indices)]
    return float(np.vdot(inside, inside).real / total)


def pq_apply(pw: PaleyWienerSpace, mask: SpatialMask, f: np.ndarray) -> np.ndarray:
    """P Q f"""
    return pw.project(mask.apply(f))


def eigenvalue_multiplicities(values: np.ndarray, tol: float = 1e-8) -> List[Tuple[float, int]]:
    """정렬되지 않은 값 목록의 (값, 중복도)"""
    return group_eigenvalues(np.sort(np.asarray(values, dtype=float)), tol)
