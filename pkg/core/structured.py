"""
해석적 고유구조 모듈

- 큐브 B_N 의 Hadamard / Dirichlet / Neumann 기저
- 코너 행렬 C_α 와 확장 라플라시안 L_α
- B_N ⊢ C_m 의 완전 고유기저 (Dirichlet 형 + Neumann 형)
- C_m 의 Dirichlet 커널과 B_N □ C_m 의 PW_{2K} 세 성분 분해
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.dense_eigen import eigh
from core.errors import ValidationError
from core.graphs import SymmetricMatrix, cube_graph, laplacian
from core.spectral import PaleyWienerSpace, pw_from_eigenpairs

logger = logging.getLogger(__name__)

_HAAR = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


# ---------------------------------------------------------------------------
# 스펙트럼 / 차원 공식
# ---------------------------------------------------------------------------

def hamming_weights(n_cube: int) -> np.ndarray:
    """인덱스 0..2^N-1 의 비트 수"""
    idx = np.arange(1 << n_cube)
    weights = np.zeros_like(idx)
    for bit in range(n_cube):
        weights += (idx >> bit) & 1
    return weights


def cycle_eigenvalues(m: int) -> np.ndarray:
    return np.sort(4.0 * np.sin(np.pi * np.arange(m) / m) ** 2)


def cube_eigenvalues(n_cube: int) -> np.ndarray:
    return np.sort(2.0 * hamming_weights(n_cube)).astype(float)


def cartesian_eigenvalues(n_cube: int, m: int) -> np.ndarray:
    """B_N □ C_m 스펙트럼 = 두 스펙트럼의 합집합(sumset)"""
    return np.sort(np.add.outer(cycle_eigenvalues(m), cube_eigenvalues(n_cube)).ravel())


def dim_k(n_cube: int, k_level: int) -> int:
    """dim_K = Σ_{κ≤K} binom(N, κ), K < 0 이면 0"""
    if k_level < 0:
        return 0
    return sum(comb(n_cube, kappa) for kappa in range(min(k_level, n_cube) + 1))


def pw2_cycle_radius(m: int) -> int:
    """PW_2(C_m) = span{E_k : |k| ≤ ⌊m/4⌋}"""
    return m // 4


def substitution_pw_dimension(n_cube: int, m: int, k_level: int) -> int:
    """
    dim PW_{2K}(B_N ⊢ C_m)

    m(dim_K - 1) 에 K 단계 고유값이 정확히 2K 가 되는 주파수 개수를 더한다
    (α = (-1)^K 일 때: K 짝수면 ν=0, K 홀수이고 m 짝수면 ν=m/2).
    """
    exact = 1 if (k_level % 2 == 0 or m % 2 == 0) else 0
    return m * (dim_k(n_cube, k_level) - 1) + exact


def cartesian_pw_dimensions(n_cube: int, m: int, k_level: int) -> Tuple[int, int, int]:
    """B_N □ C_m 의 PW_{2K} 세 성분 차원"""
    return (m * dim_k(n_cube, k_level - 2),
            (2 * pw2_cycle_radius(m) + 1) * comb(n_cube, k_level - 1),
            comb(n_cube, k_level))


# ---------------------------------------------------------------------------
# 큐브 기저
# ---------------------------------------------------------------------------

def _gamma_index(n_cube: int, gamma: Union[int, Sequence[int]]) -> int:
    if isinstance(gamma, (int, np.integer)):
        if not 0 <= gamma < (1 << n_cube):
            raise ValidationError(f"gamma 범위 초과: {gamma} (N={n_cube})")
        return int(gamma)
    bits = list(gamma)
    if len(bits) != n_cube:
        raise ValidationError(f"gamma 길이 불일치: {len(bits)} != N={n_cube}")
    if any(b not in (0, 1) for b in bits):
        raise ValidationError(f"gamma 는 0/1 비트열이어야 합니다: {bits}")
    return sum(b << (n_cube - 1 - i) for i, b in enumerate(bits))


def hadamard_vector(n_cube: int, gamma: Union[int, Sequence[int]]) -> np.ndarray:
    """h_γ(v) = 2^{-N/2} (-1)^{<v, γ>}"""
    g = _gamma_index(n_cube, gamma)
    parity = hamming_weights(n_cube)[np.bitwise_and(np.arange(1 << n_cube), g)] % 2
    return np.where(parity == 0, 1.0, -1.0) / np.sqrt(float(1 << n_cube))


def hadamard_matrix(n_cube: int) -> np.ndarray:
    """열 γ = h_γ (Haar 행렬의 N 중 크로네커 곱)"""
    h = np.ones((1, 1))
    for _ in range(n_cube):
        h = np.kron(h, _HAAR)
    return h


def level_columns(n_cube: int, k_level: int) -> np.ndarray:
    """가중치 K 인 γ 인덱스 (오름차순)"""
    return np.flatnonzero(hamming_weights(n_cube) == k_level)


def dirichlet_basis(n_cube: int, k_level: int) -> np.ndarray:
    """
    가중치 K Hadamard 벡터의 Helmert 결합으로 만든 Dirichlet 기저

    Returns:
        2^N x (binom(N,K)-1) 정규직교 행렬, 모든 열이 v_0, v_1 에서 0
    """
    if not 0 < k_level < n_cube:
        raise ValidationError(f"Dirichlet 기저는 0 < K < N 에서만 정의됩니다: K={k_level}, N={n_cube}")
    columns = hadamard_matrix(n_cube)[:, level_columns(n_cube, k_level)]
    count = columns.shape[1]
    helmert = np.zeros((count, count - 1))
    for j in range(1, count):
        helmert[:j, j - 1] = 1.0
        helmert[j, j - 1] = -float(j)
        helmert[:, j - 1] /= np.sqrt(j * (j + 1.0))
    return columns @ helmert


def neumann_vector(n_cube: int, k_level: int) -> np.ndarray:
    """h_{n,K} = binom(N,K)^{-1/2} Σ_{|γ|=K} h_γ"""
    if not 0 <= k_level <= n_cube:
        raise ValidationError(f"K 범위 초과: K={k_level}, N={n_cube}")
    columns = hadamard_matrix(n_cube)[:, level_columns(n_cube, k_level)]
    return columns.sum(axis=1) / np.sqrt(comb(n_cube, k_level))


def neumann_matrix(n_cube: int) -> np.ndarray:
    """열 K = h_{n,K} (K = 0..N)"""
    return np.column_stack([neumann_vector(n_cube, k) for k in range(n_cube + 1)])


# ---------------------------------------------------------------------------
# 확장 라플라시안
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AugmentedLaplacian:
    """L_α(B_N) = L(B_N) + C_α"""
    n_cube: int
    nu: int
    m: int
    alpha: complex
    matrix: SymmetricMatrix


def cycle_phase(nu: int, m: int) -> complex:
    return complex(np.exp(2j * np.pi * nu / m))


def corner_matrix(n_cube: int, alpha: complex) -> np.ndarray:
    """C_α = w w^H, w = e_{v0} - α e_{v1}"""
    size = 1 << n_cube
    w = np.zeros(size, dtype=complex)
    w[0] = 1.0
    w[size - 1] = -alpha
    return np.outer(w, w.conj())


def augmented_laplacian(n_cube: int, nu: int, m: int) -> AugmentedLaplacian:
    if m < 1 or not 0 <= nu < m:
        raise ValidationError(f"nu 범위 초과: nu={nu}, m={m}")
    alpha = cycle_phase(nu, m)
    base = laplacian(cube_graph(n_cube)).data
    matrix = SymmetricMatrix.from_array(base + corner_matrix(n_cube, alpha))
    return AugmentedLaplacian(n_cube=n_cube, nu=nu, m=m, alpha=alpha, matrix=matrix)


@dataclass(frozen=True)
class NeumannTypeEigen:
    """Neumann 부분공간으로 압축한 L_α 의 고유쌍"""
    n_cube: int
    nu: int
    m: int
    alpha: complex
    eigenvalues: np.ndarray   # 길이 N+1, 오름차순
    coefficients: np.ndarray  # 열 K = c_κ(α, K)
    profiles: np.ndarray      # 2^N x (N+1), 큐브 위 프로파일 φ_{ν,K,n}

    def global_vector(self, k_level: int) -> np.ndarray:
        """블록 k 값이 e^{2πiνk/m} φ / √m 인 전역 고유벡터"""
        modulation = np.exp(2j * np.pi * self.nu * np.arange(self.m) / self.m) / np.sqrt(self.m)
        return np.kron(modulation, self.profiles[:, k_level])


def neumann_type_eigen(n_cube: int, nu: int, m: int, eigen_config=None) -> NeumannTypeEigen:
    """
    L_α 를 (N+1) 차원 Neumann 부분공간 span{h_{n,0..N}} 로 압축하여 고유분해

    K 번째 고유값은 [2K, 2K+2] 에 놓인다.
    """
    augmented = augmented_laplacian(n_cube, nu, m)
    neumann = neumann_matrix(n_cube)
    compression = neumann.T @ augmented.matrix.data @ neumann
    decomposition = eigh(SymmetricMatrix.from_array(compression), eigen_config=eigen_config)
    profiles = neumann @ decomposition.vectors
    return NeumannTypeEigen(n_cube=n_cube, nu=nu, m=m, alpha=augmented.alpha,
                            eigenvalues=decomposition.values,
                            coefficients=decomposition.vectors, profiles=profiles)


# ---------------------------------------------------------------------------
# B_N ⊢ C_m 고유기저
# ---------------------------------------------------------------------------

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


@dataclass(frozen=True)
class SubstitutionEigenbasis:
    """B_N ⊢ C_m 의 해석적 고유기저 (고유값 오름차순)"""
    n_cube: int
    m: int
    values: np.ndarray
    vectors: np.ndarray
    kinds: Tuple[str, ...]
    levels: np.ndarray
    nus: np.ndarray     # Dirichlet 형은 -1
    blocks: np.ndarray  # Neumann 형은 -1

    @property
    def n(self) -> int:
        return self.m << self.n_cube

    def manifest(self) -> List[dict]:
        return [{'index': i, 'type': kind, 'K': int(self.levels[i]),
                 'nu': int(self.nus[i]), 'block': int(self.blocks[i]),
                 'eigenvalue': float(self.values[i])}
                for i, kind in enumerate(self.kinds)]

    def pw_space(self, omega: float, tol: float = 1e-9) -> PaleyWienerSpace:
        return pw_from_eigenpairs(self.values, self.vectors, omega, tol)


def substitution_eigenbasis(n_cube: int, m: int, max_eigenvalue: Optional[float] = None,
                            tol: float = 1e-9, eigen_config=None) -> SubstitutionEigenbasis:
    """
    Dirichlet 형 m(2^N-N-1) 개와 Neumann 형 m(N+1) 개로 이루어진 완전 고유기저

    Args:
        max_eigenvalue: 지정 시 고유값이 max_eigenvalue + tol 이하인 벡터만 생성
    """
    if n_cube < 1:
        raise ValidationError(f"큐브 차원은 1 이상이어야 합니다: N={n_cube}")
    if m < 3:
        raise ValidationError(f"사이클 길이는 3 이상이어야 합니다: m={m}")

    size = 1 << n_cube
    limit = np.inf if max_eigenvalue is None else max_eigenvalue + tol
    values: List[float] = []
    columns: List[np.ndarray] = []
    kinds: List[str] = []
    levels: List[int] = []
    nus: List[int] = []
    blocks: List[int] = []

    # Dirichlet 형: 블록 k 에만 지지되는 ι_k(d)
    for k_level in range(1, n_cube):
        if 2.0 * k_level > limit:
            break
        local = dirichlet_basis(n_cube, k_level)
        for block in range(m):
            for j in range(local.shape[1]):
                column = np.zeros(m * size, dtype=complex)
                column[block * size:(block + 1) * size] = local[:, j]
                columns.append(column)
                values.append(2.0 * k_level)
                kinds.append(DIRICHLET)
                levels.append(k_level)
                nus.append(-1)
                blocks.append(block)

    # Neumann 형: E_ν ⊗ φ_{ν,K}
    for nu in range(m):
        eigen = neumann_type_eigen(n_cube, nu, m, eigen_config=eigen_config)
        for k_level in range(n_cube + 1):
            if eigen.eigenvalues[k_level] > limit:
                continue
            columns.append(eigen.global_vector(k_level))
            values.append(float(eigen.eigenvalues[k_level]))
            kinds.append(NEUMANN)
            levels.append(k_level)
            nus.append(nu)
            blocks.append(-1)

    values_arr = np.array(values)
    order = np.argsort(values_arr, kind="stable")
    vectors = np.column_stack(columns)[:, order] if columns else np.zeros((m * size, 0), dtype=complex)

    basis = SubstitutionEigenbasis(
        n_cube=n_cube, m=m, values=values_arr[order], vectors=vectors,
        kinds=tuple(kinds[i] for i in order), levels=np.array(levels)[order],
        nus=np.array(nus)[order], blocks=np.array(blocks)[order])
    logger.info(f"해석적 고유기저 생성 - B_{n_cube}|-C_{m}, 벡터 {len(values)}개 "
                f"(Dirichlet {kinds.count(DIRICHLET)}, Neumann {kinds.count(NEUMANN)})")
    return basis


def substitution_eigenvalues(n_cube: int, m: int, eigen_config=None) -> np.ndarray:
    """고유벡터 없이 B_N ⊢ C_m 스펙트럼만 (오름차순)"""
    if n_cube < 1 or m < 3:
        raise ValidationError(f"잘못된 파라미터: N={n_cube}, m={m}")
    values = [np.full(m * (comb(n_cube, k) - 1), 2.0 * k) for k in range(1, n_cube)]
    values.extend(neumann_type_eigen(n_cube, nu, m, eigen_config=eigen_config).eigenvalues
                  for nu in range(m))
    return np.sort(np.concatenate(values))


# ---------------------------------------------------------------------------
# 사이클 / 곱 그래프
# ---------------------------------------------------------------------------

def cycle_fourier_vector(m: int, k: int) -> np.ndarray:
    """E_k(ℓ) = e^{2πikℓ/m} / √m"""
    return np.exp(2j * np.pi * k * np.arange(m) / m) / np.sqrt(m)


def dirichlet_kernel(m: int, n: int, normalized: bool = False) -> np.ndarray:
    """D_n(ℓ) = Σ_{|k|≤n} e^{2πikℓ/m}, normalized 이면 D̄_n = D_n / √(m(2n+1))"""
    if m < 3:
        raise ValidationError(f"사이클 길이는 3 이상이어야 합니다: m={m}")
    if not 0 <= n <= (m - 1) / 2:
        raise ValidationError(f"n 범위 초과: n={n}, m={m}")
    ell = np.arange(m)
    kernel = np.ones(m)
    for k in range(1, n + 1):
        kernel += 2.0 * np.cos(2.0 * np.pi * k * ell / m)
    if normalized:
        kernel = kernel / np.sqrt(m * (2 * n + 1))
    return kernel


@dataclass(frozen=True)
class CartesianPWDecomposition:
    """
    PW_{2K}(B_N □ C_m) 의 직교 분해 세 성분

    components[i]: 성분 i 의 정규직교 기저
    generators[i]: 슬라이스 0 마스크 PQ 의 성분 i 단위 고유벡터
    constants[i]:  해당 PQ 고유값 (1, (2n+1)/m, 1/m)
    """
    n_cube: int
    m: int
    k_level: int
    components: Tuple[np.ndarray, np.ndarray, np.ndarray]
    generators: Tuple[np.ndarray, np.ndarray, np.ndarray]
    constants: Tuple[float, float, float]
    shift_basis: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def dimensions(self) -> Tuple[int, int, int]:
        return tuple(c.shape[1] for c in self.components)

    @property
    def basis(self) -> np.ndarray:
        return np.hstack(self.components)


def _tensor_columns(cycle_vectors: np.ndarray, cube_vectors: np.ndarray) -> np.ndarray:
    """슬라이스 우선 순서의 (사이클 ⊗ 큐브) 열"""
    cols = [np.kron(cycle_vectors[:, a], cube_vectors[:, b])
            for a in range(cycle_vectors.shape[1]) for b in range(cube_vectors.shape[1])]
    if not cols:
        return np.zeros((cycle_vectors.shape[0] * cube_vectors.shape[0], 0), dtype=complex)
    return np.column_stack(cols).astype(complex)


def cartesian_pw_basis(n_cube: int, m: int, k_level: int) -> CartesianPWDecomposition:
    """PW_{2K}(B_N □ C_m) = (PW_{2K-4}(B_N)⊗ℓ²) ⊕ (Λ_{2K-2}⊗PW_2(C_m)) ⊕ (Λ_{2K}⊗Λ_0)"""
    if not 1 <= k_level < n_cube:
        raise ValidationError(f"K 는 1 ≤ K < N 이어야 합니다: K={k_level}, N={n_cube}")
    if m < 3:
        raise ValidationError(f"사이클 길이는 3 이상이어야 합니다: m={m}")

    hadamard = hadamard_matrix(n_cube)
    weights = hamming_weights(n_cube)
    low = hadamard[:, weights <= k_level - 2]
    mid = hadamard[:, weights == k_level - 1]
    top = hadamard[:, weights == k_level]

    identity = np.eye(m)
    radius = pw2_cycle_radius(m)
    exponentials = np.column_stack([cycle_fourier_vector(m, k) for k in range(-radius, radius + 1)])
    constant = np.ones((m, 1)) / np.sqrt(m)
    kernel = dirichlet_kernel(m, radius, normalized=True).reshape(m, 1)
    delta = identity[:, :1]

    components = (_tensor_columns(identity, low),
                  _tensor_columns(exponentials, mid),
                  _tensor_columns(constant, top))
    generators = (_tensor_columns(delta, low),
                  _tensor_columns(kernel, mid),
                  _tensor_columns(constant, top))
    constants = (1.0, (2 * radius + 1) / m, 1.0 / m)

    shift_basis = None
    if m % 4 == 1:
        shifts = np.column_stack([np.roll(kernel[:, 0], 2 * ell) for ell in range(2 * radius + 1)])
        shift_basis = _tensor_columns(shifts, mid)

    decomposition = CartesianPWDecomposition(
        n_cube=n_cube, m=m, k_level=k_level, components=components,
        generators=generators, constants=constants, shift_basis=shift_basis)
    logger.info(f"곱 그래프 PW 분해 - B_{n_cube}xC_{m}, K={k_level}, 차원 {decomposition.dimensions}")
    return decomposition


def cartesian_pq_spectrum(n_cube: int, m: int, k_level: int) -> List[Tuple[Fraction, int]]:
    """슬라이스 마스크 PQ 의 0이 아닌 고유값 예측 (값, 중복도)"""
    if not 1 <= k_level < n_cube:
        raise ValidationError(f"K 는 1 ≤ K < N 이어야 합니다: K={k_level}, N={n_cube}")
    predicted = [(Fraction(1), dim_k(n_cube, k_level - 2)),
                 (Fraction(2 * pw2_cycle_radius(m) + 1, m), comb(n_cube, k_level - 1)),
                 (Fraction(1, m), comb(n_cube, k_level))]
    return [(value, mult) for value, mult in predicted if mult > 0]


def cartesian_regime_identities(decomposition: CartesianPWDecomposition, trials: int = 100,
                                seed: int = 20240) -> List[float]:
    """
    성분별 측정 항등식 Σ_j |<Qf, g_j>|² = c ‖Qf‖² 의 최대 오차

    f 는 각 성분에서 뽑은 단위 무작위 함수, Q 는 슬라이스 0 제한
    """
    rng = np.random.default_rng(seed)
    size = 1 << decomposition.n_cube
    errors = []
    for basis, generators, constant in zip(decomposition.components,
                                           decomposition.generators,
                                           decomposition.constants):
        if basis.shape[1] == 0:
            errors.append(0.0)
            continue
        worst = 0.0
        for _ in range(trials):
            coords = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
            f = basis @ coords
            f /= np.linalg.norm(f)
            qf = np.zeros_like(f)
            qf[:size] = f[:size]
            measured = np.sum(np.abs(generators.conj().T @ qf) ** 2)
            worst = max(worst, abs(measured - constant * np.vdot(qf, qf).real))
        errors.append(float(worst))
        logger.debug(f"측정 항등식 상수 {constant:.6f}: 최대 오차 {worst:.3e}")
    return errors
