"""Common schemas used across the solver, converters and reports"""
import math
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator


class QuadratureRule(str, Enum):
    """Supported cumulative quadrature rules"""
    TRAP = "trap"  # composite trapezoid, second order
    RECT = "rect"  # left rectangle, fully explicit


class IterationMode(str, Enum):
    """Successive-approximation variants"""
    PICARD = "picard"
    SWEEP = "sweep"  # causal x1-slab marching


class BoundaryMode(str, Enum):
    """How boundary data is given in a problem file"""
    CLASSICAL = "classical"
    NONCLASSICAL = "nonclassical"


class FieldFormat(str, Enum):
    """On-disk field formats"""
    GF4 = "gf4"
    CSV = "csv"


class SamplerKind(str, Enum):
    """Random EVector samplers for the homeomorphism scan"""
    UNIFORM = "uniform"  # i.i.d. node values in [-1, 1]
    SMOOTH = "smooth"  # random per-axis polynomials of degree <= 1


class NormConfig(BaseModel):
    """Exponent of the L_p family; p = inf is the grid maximum"""
    p: float = 2.0

    @field_validator("p")
    @classmethod
    def check_p(cls, value: float) -> float:
        if math.isnan(value) or value < 1:
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {value}")
        return value

    @property
    def is_max(self) -> bool:
        return math.isinf(self.p)

    @classmethod
    def of(cls, p: Union["NormConfig", float, int]) -> "NormConfig":
        if isinstance(p, NormConfig):
            return p
        return cls(p=float(p))


class SolveReport(BaseModel):
    """Outcome of a successive-approximation run"""
    iterations: int = 0
    update_norms: List[float] = Field(default_factory=list)
    residual: float = 0.0
    converged: bool = False
    mode: IterationMode = IterationMode.PICARD
    stability_ratio: float = 0.0

    @property
    def last_update(self) -> float:
        return self.update_norms[-1] if self.update_norms else 0.0


class CompatReport(BaseModel):
    """Maximum violation of each compatibility identity"""
    violations: Dict[str, float]
    tol: float
    passed: bool

    @property
    def failed(self) -> List[str]:
        return [name for name, value in self.violations.items() if value > self.tol]


class ErrorMetrics(BaseModel):
    """Errors of a computed solution against a manufactured truth"""
    u_error: float
    b_error: float
    max_error: float


class ConvergenceRow(BaseModel):
    """One line of a refinement study"""
    counts: int
    spacing: float
    error: float
    order: Optional[float] = None  # None when not applicable


class HomeoScanResult(BaseModel):
    """Extremes of the ratio ||Qb||_W / ||b||_E over random samples"""
    min_ratio: float
    max_ratio: float
    ratios: List[float]
    p: float
    seed: int
    sampler: SamplerKind
