"""
샘플링 / 프레임 검사 모듈
프레임 상하한, 순환 시프트, 블록 0 PQ 고유벡터 가설 검사, 블록별 집중도 부등식,
클러스터 평균 샘플링 하한 검사
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.dense_eigen import eigh
from core.errors import ValidationError
from core.graphs import Graph, SymmetricMatrix, induced_subgraph, laplacian, validate_partition
from core.spectral import PaleyWienerSpace, SSLReport, SpatialMask, graph_fourier, pw_space, ssl_eigen
from core.structured import substitution_eigenbasis
from models import ConcentrationReport, ConjectureReport, FrameReport, PesensonReport

logger = logging.getLogger(__name__)

FAMILIES_WITH_SHIFT = ('substitution', 'cartesian')


def numerical_rank(matrix: np.ndarray, rtol: float = 1e-8) -> int:
    """상대 특이값 기준 σ / σ_max > rtol 인 개수"""
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0.0:
        return 0
    return int(np.sum(singular > rtol * singular[0]))


def frame_bounds(vectors: np.ndarray, subspace: PaleyWienerSpace, rank_rtol: float = 1e-8,
                 eigen_config=None) -> FrameReport:
    """
    부분공간 위 프레임 연산자 압축의 극값 고유값 (A, B)

    Args:
        vectors: n x J 행렬 (열 = 측정 벡터 ψ_j) 또는 벡터 목록
    """
    psi = np.column_stack(vectors) if isinstance(vectors, (list, tuple)) else np.asarray(vectors)
    if psi.ndim == 1:
        psi = psi.reshape(-1, 1)
    if psi.shape[0] != subspace.n:
        raise ValidationError(f"벡터 길이 불일치: {psi.shape[0]} != {subspace.n}")

    synthesis = subspace.basis.conj().T @ psi
    operator = SymmetricMatrix.from_array(synthesis @ synthesis.conj().T)
    values = eigh(operator, eigen_config=eigen_config).values
    rank = numerical_rank(synthesis, rank_rtol)
    report = FrameReport(lower=max(float(values[0]), 0.0), upper=float(values[-1]), rank=rank,
                         dimension=subspace.dimension, n_vectors=psi.shape[1])
    logger.debug(f"프레임 상하한 계산: {report}")
    return report


def cyclic_shift(f: np.ndarray, blocks: int, family: str, n_cube: int) -> np.ndarray:
    """블록(슬라이스) 좌표를 k0 만큼 순환 이동 (축 0 기준)"""
    if family not in FAMILIES_WITH_SHIFT:
        raise ValidationError(f"순환 시프트를 지원하지 않는 그래프 종류: {family}")
    f = np.asarray(f)
    size = 1 << n_cube
    if f.shape[0] % size != 0:
        raise ValidationError(f"벡터 길이 {f.shape[0]} 가 2^N={size} 의 배수가 아닙니다")
    return np.roll(f, blocks * size, axis=0)


def substitution_pq(n_cube: int, k_level: int, m: int, block: int = 0, tol: float = 1e-8,
                    omega: Optional[float] = None, eigen_config=None,
                    pw_tol: float = 1e-9) -> Tuple[PaleyWienerSpace, SSLReport]:
    """해석적 기저로 PW_{2K}(B_N ⊢ C_m) 와 블록 마스크 PQ 고유분해"""
    omega = 2.0 * k_level if omega is None else omega
    basis = substitution_eigenbasis(n_cube, m, max_eigenvalue=omega, tol=pw_tol,
                                    eigen_config=eigen_config)
    pw = basis.pw_space(omega, pw_tol)
    ssl = ssl_eigen(pw, SpatialMask.block(n_cube, m, block), one_tol=tol, eigen_config=eigen_config)
    return pw, ssl


def block_samples(f: np.ndarray, n_cube: int, m: int) -> np.ndarray:
    """2^N 간격 샘플: 결과[v, k] = f(k·2^N + v)"""
    return np.asarray(f).reshape(m, 1 << n_cube).T


def cardinality_ratio(f: np.ndarray, n_cube: int, m: int) -> float:
    """큐브 정점별 |s_0|² / ‖s‖² 의 최댓값"""
    samples = block_samples(f, n_cube, m)
    energy = np.sum(np.abs(samples) ** 2, axis=1)
    valid = energy > 0
    if not np.any(valid):
        return 0.0
    return float(np.max(np.abs(samples[valid, 0]) ** 2 / energy[valid]))


def conjecture_check(n_cube: int, k_level: int, m: int, tol: float = 1e-8,
                     rank_rtol: float = 1e-8, eigen_config=None) -> ConjectureReport:
    """블록 0 마스크 PQ 고유값 개수와 1/2 초과 고유벡터 순환 시프트의 랭크 검사"""
    if not 0 < k_level < n_cube:
        raise ValidationError(f"K 는 0 < K < N 이어야 합니다: K={k_level}, N={n_cube}")

    pw, ssl = substitution_pq(n_cube, k_level, m, tol=tol, eigen_config=eigen_config)

    above = ssl.above_half
    shifted = np.hstack([cyclic_shift(above, k, 'substitution', n_cube) for k in range(m)])
    shift_rank = numerical_rank(pw.basis.conj().T @ shifted, rank_rtol)

    mid = ssl.vectors[:, ssl.count_one:ssl.count_one + ssl.count_mid]
    ratios = [cardinality_ratio(mid[:, j], n_cube, m) for j in range(mid.shape[1])]

    report = ConjectureReport(
        n_cube=n_cube, k_level=k_level, m_cycle=m, pw_dimension=pw.dimension,
        count_one=ssl.count_one, count_mid=ssl.count_mid, count_small=ssl.count_small,
        shift_rank=shift_rank, mid_eigenvalues=ssl.mid_eigenvalues.tolist(),
        cardinality_ratios=ratios, tol=tol)
    logger.info(f"가설 검사 결과: {report} -> {'성립' if report.conjecture_holds else '불성립'}")
    return report


def block_measurement_basis(ssl: SSLReport, n_cube: int, block: int) -> np.ndarray:
    """블록 k 로 시프트한 1/2 초과 PQ 고유벡터를 블록 위에서 정규직교화 (2^N x r)"""
    size = 1 << n_cube
    shifted = cyclic_shift(ssl.above_half, block, 'substitution', n_cube)
    restricted = shifted[block * size:(block + 1) * size, :]
    if restricted.shape[1] == 0:
        return restricted
    q, r = np.linalg.qr(restricted)
    diagonal = np.abs(np.diag(r))
    keep = diagonal > 1e-12 * max(1.0, diagonal.max())
    return q[:, keep]


def measurement_ratio(f: np.ndarray, measurement: np.ndarray, n_cube: int, block: int) -> Optional[float]:
    """Σ_j |<Q^{(k)} f, ψ_{j,k}>|² / ‖Q^{(k)} f‖² (Q^{(k)} f = 0 이면 None)"""
    size = 1 << n_cube
    local = np.asarray(f)[block * size:(block + 1) * size]
    energy = np.vdot(local, local).real
    if energy == 0.0:
        return None
    return float(np.sum(np.abs(measurement.conj().T @ local) ** 2) / energy)


def concentration_check(n_cube: int, k_level: int, m: int, trials: int = 20, seed: int = 20240,
                        tol: float = 1e-8, eigen_config=None) -> ConcentrationReport:
    """
    블록별 집중도 부등식 μ_K ‖Q^{(k)} f‖² ≤ Σ_j |<Q^{(k)} f, ψ_{j,k}>|² ≤ ‖Q^{(k)} f‖² 검사

    (1/2, 1) 고유값 개수가 K 가 아니면 오류를 기록하고 가설 불성립 리포트를 반환한다.
    """
    if not 0 < k_level < n_cube:
        raise ValidationError(f"K 는 0 < K < N 이어야 합니다: K={k_level}, N={n_cube}")

    pw, ssl = substitution_pq(n_cube, k_level, m, tol=tol, eigen_config=eigen_config)
    mid = ssl.mid_eigenvalues
    mu_k = float(mid.min()) if mid.size else None

    if ssl.count_mid != k_level:
        logger.error(f"(1/2,1) 고유값 개수 {ssl.count_mid} != K={k_level}: 가설 불성립")
        return ConcentrationReport(n_cube=n_cube, k_level=k_level, m_cycle=m, mu_k=mu_k,
                                   count_mid=ssl.count_mid, trials=0, conjecture_holds=False)

    measurements = [block_measurement_basis(ssl, n_cube, block) for block in range(m)]
    rng = np.random.default_rng(seed)
    ratios: List[Tuple[int, int, float]] = []
    for trial in range(trials):
        f = pw.random_element(rng)
        for block in range(m):
            ratio = measurement_ratio(f, measurements[block], n_cube, block)
            if ratio is not None:
                ratios.append((trial, block, ratio))

    values = np.array([r for _, _, r in ratios]) if ratios else np.zeros(0)
    upper_ok = bool(np.all(values <= 1.0 + 1e-10))
    lower_ok = bool(np.all(values >= mu_k - 1e-10))
    report = ConcentrationReport(
        n_cube=n_cube, k_level=k_level, m_cycle=m, mu_k=mu_k, count_mid=ssl.count_mid,
        trials=trials, conjecture_holds=True,
        min_ratio=float(values.min()) if values.size else None,
        max_ratio=float(values.max()) if values.size else None,
        upper_bound_holds=upper_ok, lower_bound_holds=lower_ok, ratios=ratios)
    logger.info(f"집중도 검사 - μ_K={mu_k:.6f}, 비율 범위 "
                f"[{report.min_ratio}, {report.max_ratio}], 하한 {'성립' if lower_ok else '불성립'}")
    return report


def cluster_constants(graph: Graph, partition: Sequence[Sequence[int]],
                      sampling: Optional[Sequence[np.ndarray]] = None,
                      eigen_config=None) -> Tuple[float, float, np.ndarray]:
    """
    클러스터별 λ_{1,j} 와 θ_j 에서 (Λ, Θ, ψ 행렬) 계산

    sampling 이 없으면 ψ_j = φ_{0,j} (클러스터 위 단위 상수)
    """
    psi = np.zeros((graph.n, len(partition)),
                   dtype=complex if sampling is not None and any(np.iscomplexobj(s) for s in sampling)
                   else float)
    lambdas = []
    thetas = []
    for j, cluster in enumerate(partition):
        cluster = sorted(cluster)
        sub = induced_subgraph(graph, cluster)
        if sub.n == 1:
            lambdas.append(math.inf)
        elif sub.disconnected:
            lambdas.append(0.0)
        else:
            lambdas.append(float(eigh(laplacian(sub), eigen_config=eigen_config).values[1]))

        phi0 = np.zeros(graph.n)
        phi0[cluster] = 1.0 / np.sqrt(len(cluster))
        if sampling is None:
            psi[:, j] = phi0
        else:
            vector = np.asarray(sampling[j])
            outside = np.delete(vector, cluster)
            if outside.size and np.abs(outside).max() > 0:
                raise ValidationError(f"샘플링 벡터 {j} 가 클러스터 밖에 값을 가집니다")
            psi[:, j] = vector
        overlap = abs(np.vdot(phi0, psi[:, j])) ** 2
        thetas.append(math.inf if overlap == 0 else 1.0 / overlap)
        logger.debug(f"클러스터 {j}: 크기={len(cluster)}, λ1={lambdas[-1]:.6g}, θ={thetas[-1]:.6g}")
    return min(lambdas), max(thetas), psi


def optimal_epsilon(a: float) -> float:
    """ε/(1+ε) - aε 를 최대화하는 ε* = 1/√a - 1 (a = 0 이면 1)"""
    if a <= 0:
        return 1.0
    if a >= 1:
        return 1.0
    return 1.0 / math.sqrt(a) - 1.0


def pesenson_report(graph: Graph, partition: Sequence[Sequence[int]], omega: float,
                    epsilon: Optional[float] = None, trials: int = 100, seed: int = 20240,
                    sampling: Optional[Sequence[np.ndarray]] = None, pw_tol: float = 1e-9,
                    eigen_config=None) -> PesensonReport:
    """클러스터 샘플링의 Plancherel-Polya 하한 검사"""
    if omega < 0:
        raise ValidationError(f"omega는 0 이상이어야 합니다: {omega}")
    if epsilon is not None and epsilon <= 0:
        raise ValidationError(f"epsilon은 양수여야 합니다: {epsilon}")
    if sampling is not None and len(sampling) != len(partition):
        raise ValidationError("샘플링 벡터 수와 클러스터 수가 다릅니다")

    clusters = validate_partition(graph, partition)

    lambda_min, theta, psi = cluster_constants(graph, clusters, sampling, eigen_config)
    if omega == 0:
        a = 0.0
    elif lambda_min == 0:
        a = math.inf
    else:
        a = theta * omega / lambda_min

    eps = optimal_epsilon(a) if epsilon is None else float(epsilon)
    mu = (1.0 + eps) * a
    admissible = lambda_min > 0 and mu < 1.0
    lower_constant = (1.0 - mu) * eps / ((1.0 + eps) * theta) if math.isfinite(mu) else -math.inf
    if not admissible:
        logger.warning(f"정리 가정 밖의 파라미터: Ω={omega}, Λ={lambda_min}, Θ={theta}, μ={mu}")

    pw = pw_space(graph_fourier(graph, eigen_config=eigen_config), omega, pw_tol)
    frame = frame_bounds(psi, pw, eigen_config=eigen_config)

    rng = np.random.default_rng(seed)
    ratios = []
    violations = 0
    for _ in range(trials):
        f = pw.random_element(rng)
        ratio = float(np.sum(np.abs(psi.conj().T @ f) ** 2))
        ratios.append(ratio)
        if admissible and ratio < lower_constant - 1e-10:
            violations += 1

    report = PesensonReport(
        cluster_sizes=[len(c) for c in clusters], omega=float(omega), lambda_min=lambda_min,
        theta=theta, epsilon=eps, mu=mu, admissible=admissible, lower_constant=lower_constant,
        frame_lower=frame.lower, frame_upper=frame.upper,
        empirical_min=min(ratios) if ratios else float('nan'),
        empirical_max=max(ratios) if ratios else float('nan'),
        trials=trials, violations=violations, ratios=ratios)
    logger.info(f"샘플링 하한 검사 - Λ={lambda_min:.6g}, Θ={theta:.6g}, μ={mu:.6g}, "
                f"하한={lower_constant:.6g}, 경험적 최소={report.empirical_min:.6g}, 위반 {violations}건")
    return report
