"""
설정 관리 모듈
환경 변수 및 기본 설정, 실행 설정(RunConfig) 검증
"""
import os
import logging
from dataclasses import dataclass, field, asdict
from typing import Optional

from core.errors import ValidationError


FAMILIES = ('substitution', 'cartesian', 'abelian', 'custom')
OUTPUT_FORMATS = ('csv', 'json')
EIGEN_BACKENDS = ('auto', 'householder', 'lapack')


@dataclass
class EigenConfig:
    """고유값 솔버 관련 설정"""
    backend: str = "auto"
    direct_max_order: int = 512  # auto 모드에서 자체 QL 솔버를 쓰는 최대 차수
    max_sweeps: int = 30         # 고유값 하나당 Givens 회전 상한 = max_sweeps * 차수
    cluster_tol: float = 1e-9


@dataclass
class SpectralConfig:
    """PW 공간 / PQ 관련 허용오차"""
    pw_tol: float = 1e-9
    one_tol: float = 1e-8
    rank_rtol: float = 1e-8
    zero_mode_tol: float = 1e-12


@dataclass
class OutputConfig:
    """산출물 관련 설정"""
    output_dir: str = "results"
    output_format: str = "csv"
    csv_digits: int = 15


@dataclass
class DatabaseConfig:
    """실행 기록 데이터베이스 설정"""
    enable_sqlite: bool = True
    db_path: str = "ssl_runs.db"


@dataclass
class LoggingConfig:
    """로깅 관련 설정"""
    log_level: str = "INFO"
    log_file: str = "ssl_toolkit.log"
    max_file_size: int = 10 * 1024 * 1024  # 10MB
    backup_count: int = 5
    syslog_host: Optional[str] = None
    syslog_port: int = 514


@dataclass
class AppConfig:
    """애플리케이션 전체 설정"""
    eigen: EigenConfig
    spectral: SpectralConfig
    output: OutputConfig
    database: DatabaseConfig
    logging: LoggingConfig
    default_seed: int = 20240


@dataclass
class RunConfig:
    """CLI 한 번의 실행 설정"""
    family: str = "substitution"
    n_cube: Optional[int] = None
    m_cycle: Optional[int] = None
    k_level: Optional[int] = None
    omega: Optional[float] = None
    block: int = 0
    tol: float = 1e-8
    output_dir: str = "results"
    output_format: str = "csv"
    seed: int = 20240
    group: Optional[str] = None
    subsets: Optional[str] = None
    edges: Optional[str] = None
    trials: int = 100
    epsilon: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def resolved_omega(self) -> float:
        """omega 미지정 시 2K 사용"""
        if self.omega is not None:
            return float(self.omega)
        if self.k_level is None:
            raise ValidationError("--omega 또는 --k 중 하나가 필요합니다")
        return 2.0 * self.k_level


def load_config_from_env() -> AppConfig:
    """환경 변수에서 설정 로드"""

    eigen_config = EigenConfig(
        backend=os.getenv('EIGEN_BACKEND', 'auto').lower(),
        direct_max_order=int(os.getenv('EIGEN_DIRECT_MAX_ORDER', '512')),
        max_sweeps=int(os.getenv('EIGEN_MAX_SWEEPS', '30')),
        cluster_tol=float(os.getenv('CLUSTER_TOL', '1e-9'))
    )
    if eigen_config.backend not in EIGEN_BACKENDS:
        raise ValidationError(f"알 수 없는 EIGEN_BACKEND: {eigen_config.backend}")

    spectral_config = SpectralConfig(
        pw_tol=float(os.getenv('PW_TOL', '1e-9')),
        one_tol=float(os.getenv('ONE_TOL', '1e-8')),
        rank_rtol=float(os.getenv('RANK_RTOL', '1e-8'))
    )

    output_config = OutputConfig(
        output_dir=os.getenv('OUTPUT_DIR', 'results'),
        output_format=os.getenv('OUTPUT_FORMAT', 'csv').lower(),
        csv_digits=int(os.getenv('CSV_DIGITS', '15'))
    )

    database_config = DatabaseConfig(
        enable_sqlite=os.getenv('ENABLE_SQLITE', 'true').lower() == 'true',
        db_path=os.getenv('DATABASE_PATH', 'ssl_runs.db')
    )

    logging_config = LoggingConfig(
        log_level=os.getenv('LOG_LEVEL', 'INFO').upper(),
        log_file=os.getenv('LOG_FILE', 'ssl_toolkit.log'),
        max_file_size=int(os.getenv('LOG_MAX_SIZE', str(10 * 1024 * 1024))),
        backup_count=int(os.getenv('LOG_BACKUP_COUNT', '5')),
        syslog_host=os.getenv('SYSLOG_HOST'),
        syslog_port=int(os.getenv('SYSLOG_PORT', '514'))
    )

    return AppConfig(
        eigen=eigen_config,
        spectral=spectral_config,
        output=output_config,
        database=database_config,
        logging=logging_config,
        default_seed=int(os.getenv('DEFAULT_SEED', '20240'))
    )


def build_run_config(command: str, family: str, n_cube: Optional[int], m_cycle: Optional[int],
                     k_level: Optional[int], omega: Optional[float], block: int, tol: float,
                     output_dir: str, output_format: str, seed: int, **extra) -> RunConfig:
    """실행 설정 생성 및 계산 전 검증"""
    if family not in FAMILIES:
        raise ValidationError(f"알 수 없는 family: {family}")
    if output_format not in OUTPUT_FORMATS:
        raise ValidationError(f"알 수 없는 출력 형식: {output_format}")
    if tol <= 0:
        raise ValidationError(f"tol은 양수여야 합니다: {tol}")
    if omega is not None and omega < 0:
        raise ValidationError(f"omega는 0 이상이어야 합니다: {omega}")

    run_config = RunConfig(
        family=family, n_cube=n_cube, m_cycle=m_cycle, k_level=k_level, omega=omega,
        block=block, tol=tol, output_dir=output_dir, output_format=output_format, seed=seed,
        group=extra.pop('group', None), subsets=extra.pop('subsets', None),
        edges=extra.pop('edges', None), trials=extra.pop('trials', 100),
        epsilon=extra.pop('epsilon', None), extra=extra
    )

    if family in ('substitution', 'cartesian'):
        if n_cube is None or n_cube < 1:
            raise ValidationError(f"{family}: --n 은 1 이상이어야 합니다")
        if m_cycle is None or m_cycle < 3:
            raise ValidationError(f"{family}: --m 은 3 이상이어야 합니다")
        if not 0 <= block < m_cycle:
            raise ValidationError(f"--block 범위 초과: {block} (m={m_cycle})")
        if command in ('pq', 'conjecture', 'frame', 'cartesian', 'figure') or \
                (command == 'dims' and k_level is not None):
            if k_level is None and command != 'dims':
                raise ValidationError(f"{command}: --k 가 필요합니다")
            if k_level is not None and not 0 < k_level < n_cube:
                raise ValidationError(f"--k 는 0 < K < N 이어야 합니다: K={k_level}, N={n_cube}")
    elif family == 'abelian':
        if not run_config.group:
            raise ValidationError("abelian: --group 이 필요합니다 (예: 4x5)")
    elif family == 'custom':
        if not run_config.edges:
            raise ValidationError("custom: --edges 파일이 필요합니다")
    if run_config.trials < 1:
        raise ValidationError(f"trials는 1 이상이어야 합니다: {run_config.trials}")

    return run_config


def setup_logging(config: LoggingConfig):
    """로깅 설정 초기화"""
    import socket
    from logging.handlers import RotatingFileHandler, SysLogHandler

    log_handlers = []

    # 파일 로깅 (로테이션 지원), 빈 문자열이면 비활성화
    if config.log_file:
        file_handler = RotatingFileHandler(
            config.log_file,
            maxBytes=config.max_file_size,
            backupCount=config.backup_count,
            encoding='utf-8'
        )
        log_handlers.append(file_handler)

    console_handler = logging.StreamHandler()
    log_handlers.append(console_handler)

    if config.syslog_host:
        try:
            syslog_handler = SysLogHandler(
                address=(config.syslog_host, config.syslog_port)
            )
            syslog_handler.setFormatter(logging.Formatter(
                f'{socket.gethostname()} ssl-toolkit: %(levelname)s - %(message)s'
            ))
            log_handlers.append(syslog_handler)
        except Exception as e:
            print(f"Syslog 설정 실패: {e}")

    logging.basicConfig(
        level=getattr(logging, config.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s',
        handlers=log_handlers,
        force=True
    )
