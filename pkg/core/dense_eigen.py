"""
조밀 에르미트 고유값 솔버
Householder 삼중대각화 + Wilkinson 시프트 암시적 QL 반복.
큰 차수는 LAPACK(scipy) 백엔드로 위임하고 결과 후처리는 공통으로 적용
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from core.errors import ConvergenceError, ValidationError
from core.graphs import SymmetricMatrix

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EigenDecomposition:
    """오름차순 고유값과 열 정규직교 고유벡터"""
    values: np.ndarray
    vectors: np.ndarray
    residual_norm: float
    orthogonality_error: float
    backend: str

    @property
    def order(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def householder_tridiagonalize(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    에르미트 행렬을 실 대칭 삼중대각 행렬로 변환: A = Q T Q^H

    Returns:
        (대각 d, 부대각 e (길이 n-1, e[i]는 i와 i+1 결합), 유니터리 Q)
    """
    b = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
    n = b.shape[0]
    q = np.eye(n, dtype=b.dtype)

    for k in range(n - 2):
        x = b[k + 1:, k]
        sigma = np.linalg.norm(x)
        if sigma == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if abs(x0) > 0 else 1.0
        v = x.copy()
        v[0] += phase * sigma
        v /= np.linalg.norm(v)

        # B' = H B H, H = I - 2 v v^H
        sub = b[k + 1:, k + 1:]
        p = 2.0 * (sub @ v)
        kappa = np.vdot(v, p)
        w = p - kappa * v
        sub -= np.outer(v, w.conj()) + np.outer(w, v.conj())

        b[k + 1:, k] = 0.0
        b[k, k + 1:] = 0.0
        b[k + 1, k] = -phase * sigma
        b[k, k + 1] = np.conj(b[k + 1, k])

        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())

    d = np.real(np.diag(b)).copy()
    off = np.array([b[i + 1, i] for i in range(n - 1)], dtype=b.dtype)

    # 부대각 위상을 대각 유니터리로 흡수하여 T 를 실수로 만든다
    if np.iscomplexobj(off):
        scale = np.ones(n, dtype=complex)
        for i in range(n - 1):
            magnitude = abs(off[i])
            scale[i + 1] = scale[i] * (off[i] / magnitude) if magnitude > 0 else scale[i]
        q = q * scale[np.newaxis, :]
        e = np.abs(off)
    else:
        e = off.astype(float)
    return d, e, q


def tridiagonal_ql(d: np.ndarray, e: np.ndarray, z: Optional[np.ndarray] = None,
                   max_sweeps: int = 30) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    실 대칭 삼중대각 행렬의 암시적 QL 반복 (Wilkinson 시프트)

    z 가 주어지면 회전을 z 의 열에 누적한다 (z @ 고유벡터).
    고유값 하나당 Givens 회전은 max_sweeps * n 개까지 허용하며,
    다음 스윕이 이 상한을 넘기면 ConvergenceError 를 발생시킨다.
    """
    d = np.array(d, dtype=float)
    n = d.shape[0]
    e = np.append(np.array(e, dtype=float), 0.0)
    # 행 단위 회전을 위해 전치본에 누적
    zt = None if z is None else np.array(z.T, copy=True)

    budget = max_sweeps * n
    for ell in range(n):
        sweeps = 0
        rotations = 0
        while True:
            mm = ell
            while mm < n - 1:
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) <= _EPS * dd:
                    break
                mm += 1
            if mm == ell:
                break
            if rotations + (mm - ell) > budget:
                raise ConvergenceError(
                    f"QL 반복이 수렴하지 않았습니다 (index={ell}, sweeps={sweeps}, "
                    f"rotations={rotations}, budget={budget})",
                    index=ell, sweeps=sweeps, offdiag=float(abs(e[ell])), rotations=rotations)
            sweeps += 1

            g = (d[ell + 1] - d[ell]) / (2.0 * e[ell])
            r = math.hypot(g, 1.0)
            g = d[mm] - d[ell] + e[ell] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = mm - 1
            deflated = False
            while i >= ell:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                rotations += 1
                if r == 0.0:
                    d[i + 1] -= p
                    e[mm] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    upper = zt[i + 1].copy()
                    zt[i + 1] = s * zt[i] + c * upper
                    zt[i] = c * zt[i] - s * upper
                i -= 1
            if deflated:
                continue
            d[ell] -= p
            e[ell] = g
            e[mm] = 0.0

    return d, (None if zt is None else zt.T)


def _as_hermitian(a: Union[SymmetricMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(a, SymmetricMatrix):
        return a.data
    array = np.asarray(a)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValidationError(f"정방 행렬이 아닙니다: shape={array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError("행렬에 NaN/Inf 값이 있습니다")
    scale = 1.0 + (np.abs(array).max() if array.size else 0.0)
    if array.size and np.abs(array - array.conj().T).max() > 1e-12 * scale:
        raise ValidationError("에르미트 행렬이 아닙니다")
    return SymmetricMatrix.from_array(array).data


def cluster_ranges(values: np.ndarray, tol: float) -> List[Tuple[int, int]]:
    """오름차순 값에서 인접 간격이 tol 이하인 구간 [start, stop) 목록"""
    if tol < 0:
        raise ValidationError(f"tol은 0 이상이어야 합니다: {tol}")
    ranges = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            ranges.append((start, i))
            start = i
    if len(values):
        ranges.append((start, len(values)))
    return ranges


def group_eigenvalues(values, tol: float) -> List[Tuple[float, int]]:
    """연속한 값이 tol 이내이면 병합 (대표값 = 클러스터 평균)"""
    values = np.asarray(values, dtype=float)
    return [(float(values[start:stop].mean()), stop - start)
            for start, stop in cluster_ranges(values, tol)]


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """각 열의 절댓값 최대 성분을 양의 실수로"""
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    pivot_values = vectors[pivots, np.arange(vectors.shape[1])]
    magnitudes = np.abs(pivot_values)
    magnitudes[magnitudes == 0] = 1.0
    return vectors * (np.conj(pivot_values) / magnitudes)[np.newaxis, :]


def eigh(a: Union[SymmetricMatrix, np.ndarray], backend: str = "auto",
         direct_max_order: int = 512, max_sweeps: int = 30, cluster_tol: float = 1e-9,
         eigen_config=None) -> EigenDecomposition:
    """
    에르미트 행렬 고유분해

    Args:
        a: SymmetricMatrix 또는 에르미트 ndarray
        backend: "auto" | "householder" | "lapack"
        max_sweeps: 고유값 하나당 QL 회전 상한 배수 (상한 = max_sweeps * n)
        eigen_config: config.EigenConfig (지정 시 다른 인자보다 우선)
    """
    if eigen_config is not None:
        backend = eigen_config.backend
        direct_max_order = eigen_config.direct_max_order
        max_sweeps = eigen_config.max_sweeps
        cluster_tol = eigen_config.cluster_tol

    matrix = _as_hermitian(a)
    n = matrix.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=matrix.dtype), 0.0, 0.0, backend)

    if backend == "auto":
        backend = "householder" if n <= direct_max_order else "lapack"

    if backend == "householder":
        d, e, q = householder_tridiagonalize(matrix)
        values, vectors = tridiagonal_ql(d, e, q, max_sweeps=max_sweeps)
    elif backend == "lapack":
        values, vectors = scipy.linalg.eigh(matrix)
    else:
        raise ValidationError(f"알 수 없는 고유값 백엔드: {backend}")

    order = np.argsort(values, kind="stable")
    values = np.asarray(values)[order]
    vectors = np.asarray(vectors)[:, order]

    # 축퇴 클러스터 내부 재정규직교화
    for start, stop in cluster_ranges(values, cluster_tol):
        if stop - start > 1:
            qmat, _ = np.linalg.qr(vectors[:, start:stop])
            vectors[:, start:stop] = qmat
    vectors = _fix_phases(vectors)

    residual = np.linalg.norm(matrix @ vectors - vectors * values, axis=0).max()
    gram = vectors.conj().T @ vectors
    orthogonality = np.abs(gram - np.eye(n)).max()
    norm = np.abs(values).max()

    if residual > 1e-9 * (1.0 + norm):
        logger.warning(f"고유분해 잔차가 큽니다: residual={residual:.3e}, ‖A‖={norm:.3e}")
    logger.debug(f"고유분해 완료 - n={n}, backend={backend}, residual={residual:.2e}")

    return EigenDecomposition(values=values, vectors=vectors, residual_norm=float(residual),
                              orthogonality_error=float(orthogonality), backend=backend)
