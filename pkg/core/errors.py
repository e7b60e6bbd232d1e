"""
툴킷 예외 정의
CLI 종료 코드: ValidationError -> 2, ConvergenceError -> 3
"""
from typing import Optional


class ToolkitError(Exception):
    """툴킷 공통 예외"""


class ValidationError(ToolkitError, ValueError):
    """입력 전제조건 위반"""


class ConvergenceError(ToolkitError, RuntimeError):
    """고유값 반복 상한 초과"""

    def __init__(self, message: str, index: Optional[int] = None,
                 sweeps: Optional[int] = None, offdiag: Optional[float] = None,
                 rotations: Optional[int] = None):
        super().__init__(message)
        self.index = index
        self.sweeps = sweeps
        self.offdiag = offdiag
        self.rotations = rotations

    def diagnostics(self) -> dict:
        return {'index': self.index, 'sweeps': self.sweeps, 'offdiag': self.offdiag,
                'rotations': self.rotations}
