"""
유한 아벨 군 푸리에 해석
푸리에 행렬, 대칭 부분집합 (S, Σ) 에 대한 PQ 고유쌍, 스펙트럼 누적 항등식
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.dense_eigen import eigh
from core.errors import ValidationError
from core.graphs import SymmetricMatrix
from models import AccumulationReport

logger = logging.getLogger(__name__)

Element = Union[int, Sequence[int]]


@dataclass(frozen=True)
class AbelianGroup:
    """Π Z_{m_ν} (원소 = 나머지 튜플, 혼합 기수 순서)"""
    factors: Tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValidationError("군의 인수가 비어 있습니다")
        if any(int(m) < 2 for m in self.factors):
            raise ValidationError(f"모든 인수는 2 이상이어야 합니다: {self.factors}")

    @property
    def order(self) -> int:
        return int(np.prod(self.factors))

    def index(self, element: Element) -> int:
        residues = (element,) if isinstance(element, (int, np.integer)) else tuple(element)
        if len(residues) != len(self.factors):
            raise ValidationError(f"원소 {element} 의 길이가 인수 개수 {len(self.factors)} 와 다릅니다")
        return int(np.ravel_multi_index([int(r) % m for r, m in zip(residues, self.factors)],
                                        self.factors))

    def element(self, index: int) -> Tuple[int, ...]:
        return tuple(int(r) for r in np.unravel_index(index, self.factors))

    def negation(self) -> np.ndarray:
        """인덱스 s -> -s 의 인덱스"""
        grids = np.indices(self.factors).reshape(len(self.factors), -1)
        negated = [(-g) % m for g, m in zip(grids, self.factors)]
        return np.ravel_multi_index(negated, self.factors)

    def __str__(self) -> str:
        return "x".join(str(m) for m in self.factors)


@dataclass(frozen=True)
class FourierMatrix:
    """F(s, σ), 정규화된 사이클 지수 벡터의 텐서 곱"""
    group: AbelianGroup
    matrix: np.ndarray


@dataclass(frozen=True)
class SymmetricSubset:
    """원소 인덱스 집합과 대칭 여부 (s ∈ S ⟺ -s ∈ S)"""
    group: AbelianGroup
    indices: Tuple[int, ...]
    symmetric: bool

    @classmethod
    def from_indices(cls, group: AbelianGroup, indices: Iterable[int]) -> 'SymmetricSubset':
        chosen = tuple(sorted(set(int(i) for i in indices)))
        if not chosen:
            raise ValidationError("부분집합이 비어 있습니다")
        if chosen[0] < 0 or chosen[-1] >= group.order:
            raise ValidationError(f"원소 인덱스 범위 초과 (|G|={group.order})")
        negation = group.negation()
        symmetric = set(int(negation[i]) for i in chosen) == set(chosen)
        return cls(group=group, indices=chosen, symmetric=symmetric)

    @classmethod
    def from_elements(cls, group: AbelianGroup, elements: Iterable[Element]) -> 'SymmetricSubset':
        return cls.from_indices(group, [group.index(e) for e in elements])

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class AbelianPQEigen:
    """PQ 고유쌍 (고유값 내림차순), vectors 는 ℓ²(G) 로 옮긴 φ_ν"""
    eigenvalues: np.ndarray
    coordinates: np.ndarray
    vectors: np.ndarray


def abelian_fourier(group: AbelianGroup) -> FourierMatrix:
    matrix = np.ones((1, 1), dtype=complex)
    for m in group.factors:
        s = np.arange(m)
        factor = np.exp(2j * np.pi * np.outer(s, s) / m) / np.sqrt(m)
        matrix = np.kron(matrix, factor)
    return FourierMatrix(group=group, matrix=matrix)


def _check_subsets(group: AbelianGroup, subset: SymmetricSubset, sigma: SymmetricSubset):
    if subset.group != group or sigma.group != group:
        raise ValidationError("부분집합이 다른 군에 속합니다")
    if not subset.symmetric:
        raise ValidationError("S 가 대칭이 아닙니다 (S ≠ -S)")
    if not sigma.symmetric:
        raise ValidationError("Σ 가 대칭이 아닙니다 (Σ ≠ -Σ)")
    if len(subset) < len(sigma):
        logger.warning(f"|S|={len(subset)} < |Σ|={len(sigma)}: PQ 랭크가 |Σ| 보다 작을 수 있습니다")


def abelian_pq_eigen(group: AbelianGroup, subset: SymmetricSubset, sigma: SymmetricSubset,
                     fourier: Optional[FourierMatrix] = None, eigen_config=None) -> AbelianPQEigen:
    """압축 F_{S,Σ}^H F_{S,Σ} 의 고유분해"""
    _check_subsets(group, subset, sigma)
    f = (fourier or abelian_fourier(group)).matrix
    band = f[:, list(sigma.indices)]
    restricted = band[list(subset.indices), :]
    decomposition = eigh(SymmetricMatrix.from_array(restricted.conj().T @ restricted),
                         eigen_config=eigen_config)
    coordinates = decomposition.vectors[:, ::-1]
    return AbelianPQEigen(eigenvalues=decomposition.values[::-1].copy(),
                          coordinates=coordinates.copy(), vectors=band @ coordinates)


def mercer_check(group: AbelianGroup, subset: SymmetricSubset, sigma: SymmetricSubset,
                 eigen: Optional[AbelianPQEigen] = None,
                 fourier: Optional[FourierMatrix] = None) -> float:
    """
    커널 K(s,t) = Σ φ_ν(s) φ̄_ν(t) 의 열과 PQ δ_t 비교의 최대 편차

    t ∈ S 이면 K(·,t) = PQ δ_t, t ∉ S 이면 PQ δ_t = 0
    """
    f = (fourier or abelian_fourier(group)).matrix
    eigen = eigen or abelian_pq_eigen(group, subset, sigma, FourierMatrix(group, f))
    band = f[:, list(sigma.indices)]
    projector = band @ band.conj().T
    mask = np.zeros(group.order)
    mask[list(subset.indices)] = 1.0
    pq = projector * mask[np.newaxis, :]

    kernel = eigen.vectors @ eigen.vectors.conj().T
    inside = list(subset.indices)
    inside_set = set(inside)
    outside = [t for t in range(group.order) if t not in inside_set]
    deviation = float(np.abs(kernel[:, inside] - pq[:, inside]).max())
    if outside:
        deviation = max(deviation, float(np.abs(pq[:, outside]).max()))
    return deviation


def spectral_accumulation(group: AbelianGroup, subset: SymmetricSubset, sigma: SymmetricSubset,
                          zero_mode_tol: float = 1e-12, with_mercer: bool = True,
                          eigen_config=None) -> AccumulationReport:
    """σ ↦ Σ_ν μ_ν |F^H φ_ν(σ)|² 와 (|S|/|G|) 𝟙_Σ(σ) 비교"""
    fourier = abelian_fourier(group)
    eigen = abelian_pq_eigen(group, subset, sigma, fourier, eigen_config)
    coefficients = fourier.matrix.conj().T @ eigen.vectors
    active = eigen.eigenvalues > zero_mode_tol
    accumulation = (np.abs(coefficients[:, active]) ** 2) @ eigen.eigenvalues[active]

    expected = np.zeros(group.order)
    expected[list(sigma.indices)] = len(subset) / group.order
    deviation = float(np.abs(accumulation - expected).max())

    mercer = mercer_check(group, subset, sigma, eigen, fourier) if with_mercer else None
    report = AccumulationReport(
        factors=list(group.factors), s_size=len(subset), sigma_size=len(sigma),
        eigenvalues=eigen.eigenvalues, accumulation=accumulation, expected=expected,
        max_deviation=deviation, trace=float(eigen.eigenvalues.sum()),
        expected_trace=len(subset) * len(sigma) / group.order, mercer_deviation=mercer)
    logger.info(f"스펙트럼 누적 검사 - G={group}, |S|={len(subset)}, |Σ|={len(sigma)}, "
                f"최대 편차={deviation:.3e}")
    return report


def random_symmetric_subset(group: AbelianGroup, min_size: int,
                            rng: np.random.Generator) -> SymmetricSubset:
    """{s, -s} 궤도를 무작위로 더해 min_size 이상의 대칭 부분집합 생성"""
    if not 1 <= min_size <= group.order:
        raise ValidationError(f"min_size 범위 초과: {min_size} (|G|={group.order})")
    negation = group.negation()
    orbits: List[Tuple[int, ...]] = []
    seen = set()
    for s in range(group.order):
        if s not in seen:
            orbit = tuple(sorted({s, int(negation[s])}))
            seen.update(orbit)
            orbits.append(orbit)

    chosen: List[int] = []
    for position in rng.permutation(len(orbits)):
        if len(chosen) >= min_size:
            break
        chosen.extend(orbits[position])
    return SymmetricSubset.from_indices(group, chosen)


def random_group(rng: np.random.Generator, max_order: int = 360,
                 factor_range: Tuple[int, int] = (2, 7), max_factors: int = 3) -> AbelianGroup:
    """인수가 factor_range 에 있고 |G| ≤ max_order 인 무작위 군"""
    while True:
        count = int(rng.integers(1, max_factors + 1))
        factors = tuple(int(x) for x in rng.integers(factor_range[0], factor_range[1] + 1, size=count))
        if int(np.prod(factors)) <= max_order:
            return AbelianGroup(factors)
