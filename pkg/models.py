"""
스펙트럼 툴킷 데이터 모델
검사 결과 리포트와 실행 기록 데이터 클래스 정의
"""
import json
import socket
from dataclasses import dataclass, field
from datetime import datetime, timezone, timedelta
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

import numpy as np
from typing_extensions import Self


def to_builtin(value):
    """numpy / Fraction 값을 JSON 직렬화 가능한 값으로 변환"""
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return {'re': value.real.tolist(), 'im': value.imag.tolist()}
        return value.tolist()
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, datetime):
        return value.isoformat()
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    return value


class _ReportMixin:
    def to_dict(self) -> dict:
        """딕셔너리로 변환 (JSON 직렬화용)"""
        return {key: to_builtin(value) for key, value in self.__dict__.items()}


@dataclass
class FrameReport(_ReportMixin):
    """프레임 하한/상한 리포트"""
    lower: float
    upper: float
    rank: int
    dimension: int
    n_vectors: int

    @property
    def is_frame(self) -> bool:
        return self.rank == self.dimension and self.lower > 0

    def __str__(self) -> str:
        return (f"FrameReport(A={self.lower:.6g}, B={self.upper:.6g}, "
                f"rank={self.rank}/{self.dimension})")


@dataclass
class ConjectureReport(_ReportMixin):
    """블록 0 마스크 PQ 고유값 개수 / 시프트 랭크 검사 결과"""
    n_cube: int
    k_level: int
    m_cycle: int
    pw_dimension: int
    count_one: int
    count_mid: int
    count_small: int
    shift_rank: int
    mid_eigenvalues: List[float] = field(default_factory=list)
    cardinality_ratios: List[float] = field(default_factory=list)
    tol: float = 1e-8

    @property
    def dim_k(self) -> int:
        return sum(comb(self.n_cube, kappa) for kappa in range(self.k_level + 1))

    @property
    def predicted(self) -> Dict[str, int]:
        return {
            'count_one': self.dim_k - (self.k_level + 1),
            'count_mid': self.k_level,
            'shift_rank': self.m_cycle * (self.dim_k - 1),
        }

    @property
    def conjecture_holds(self) -> bool:
        expected = self.predicted
        return (self.count_one == expected['count_one']
                and self.count_mid == expected['count_mid']
                and self.shift_rank == expected['shift_rank'])

    def to_dict(self) -> dict:
        result = super().to_dict()
        result['dim_k'] = self.dim_k
        result['predicted'] = self.predicted
        result['conjecture_holds'] = self.conjecture_holds
        return result

    def __str__(self) -> str:
        return (f"ConjectureReport(N={self.n_cube}, K={self.k_level}, m={self.m_cycle}, "
                f"one={self.count_one}, mid={self.count_mid}, small={self.count_small}, "
                f"shift_rank={self.shift_rank})")


@dataclass
class ConcentrationReport(_ReportMixin):
    """블록별 집중도 부등식 검사 결과"""
    n_cube: int
    k_level: int
    m_cycle: int
    mu_k: Optional[float]
    count_mid: int
    trials: int
    conjecture_holds: bool
    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    upper_bound_holds: bool = True
    lower_bound_holds: Optional[bool] = None
    # (trial, block, ratio) 목록
    ratios: List[Tuple[int, int, float]] = field(default_factory=list)


@dataclass
class PesensonReport(_ReportMixin):
    """클러스터 샘플링 하한 부등식 검사 결과"""
    cluster_sizes: List[int]
    omega: float
    lambda_min: float
    theta: float
    epsilon: float
    mu: float
    admissible: bool
    lower_constant: float
    frame_lower: float
    frame_upper: float
    empirical_min: float
    empirical_max: float
    trials: int
    violations: int = 0
    ratios: List[float] = field(default_factory=list)

    @property
    def lower_bound_holds(self) -> Optional[bool]:
        if not self.admissible:
            return None
        return self.violations == 0

    def to_dict(self) -> dict:
        result = super().to_dict()
        result['lower_bound_holds'] = self.lower_bound_holds
        return result


@dataclass
class AccumulationReport(_ReportMixin):
    """유한 아벨 군 스펙트럼 누적 항등식 결과"""
    factors: List[int]
    s_size: int
    sigma_size: int
    eigenvalues: np.ndarray
    accumulation: np.ndarray
    expected: np.ndarray
    max_deviation: float
    trace: float
    expected_trace: float
    mercer_deviation: Optional[float] = None

    @property
    def group_order(self) -> int:
        return int(np.prod(self.factors))

    def rows(self) -> List[Tuple[int, float, float]]:
        """CSV 행 (sigma index, accumulation, expected)"""
        return [(i, float(a), float(e))
                for i, (a, e) in enumerate(zip(self.accumulation, self.expected))]


@dataclass
class RegimeReport(_ReportMixin):
    """곱 그래프 PW 분해 세 성분의 노름 항등식 검사 결과"""
    n_cube: int
    m_cycle: int
    k_level: int
    dimensions: List[int]
    constants: List[float]
    max_errors: List[float]
    trials: int

    @property
    def max_error(self) -> float:
        return max(self.max_errors) if self.max_errors else 0.0


@dataclass
class RunRecord:
    """CLI 실행 기록 데이터 클래스"""

    # 필수 필드
    timestamp: datetime
    command: str
    family: str

    # 파라미터
    n_cube: Optional[int] = None
    m_cycle: Optional[int] = None
    k_level: Optional[int] = None
    omega: Optional[float] = None
    seed: Optional[int] = None

    # 결과
    status: str = "ok"
    exit_code: int = 0
    summary: Optional[str] = None  # JSON 문자열
    output_dir: Optional[str] = None

    # 메타데이터
    hostname: Optional[str] = None
    toolkit_version: Optional[str] = None

    # 데이터베이스 전용 필드
    id: Optional[int] = None
    created_at: Optional[datetime] = None

    def __str__(self) -> str:
        return (f"RunRecord(command={self.command}, family={self.family}, "
                f"status={self.status}, exit_code={self.exit_code})")

    def to_dict(self) -> dict:
        """딕셔너리로 변환 (JSON 직렬화용)"""
        result = {}
        for key, value in self.__dict__.items():
            if isinstance(value, datetime):
                result[key] = value.isoformat()
            else:
                result[key] = value
        return result

    @classmethod
    def from_run(cls, command: str, run_config, status: str, exit_code: int,
                 summary: Optional[dict], version: str) -> Self:
        """RunConfig 와 결과 요약에서 RunRecord 생성"""

        # KST 타임존 설정 (UTC+9)
        kst = timezone(timedelta(hours=9))

        return cls(
            timestamp=datetime.now(kst),
            command=command,
            family=run_config.family,
            n_cube=run_config.n_cube,
            m_cycle=run_config.m_cycle,
            k_level=run_config.k_level,
            omega=run_config.omega,
            seed=run_config.seed,
            status=status,
            exit_code=exit_code,
            summary=json.dumps(to_builtin(summary or {}), sort_keys=True),
            output_dir=run_config.output_dir,
            hostname=socket.gethostname(),
            toolkit_version=version
        )
