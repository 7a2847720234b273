"""Pydantic schemas for reports, options and problem documents"""
from goursat4d.schemas.common import (
    BoundaryMode,
    CompatReport,
    ConvergenceRow,
    ErrorMetrics,
    FieldFormat,
    HomeoScanResult,
    IterationMode,
    NormConfig,
    QuadratureRule,
    SamplerKind,
    SolveReport,
)
from goursat4d.schemas.problem import (
    RHS_KEY,
    BoundarySpec,
    FieldEntry,
    FieldRef,
    GridSpec,
    ProblemSpec,
    SolverSpec,
)

__all__ = [
    "BoundaryMode",
    "CompatReport",
    "ConvergenceRow",
    "ErrorMetrics",
    "FieldFormat",
    "HomeoScanResult",
    "IterationMode",
    "NormConfig",
    "QuadratureRule",
    "SamplerKind",
    "SolveReport",
    "RHS_KEY",
    "BoundarySpec",
    "FieldEntry",
    "FieldRef",
    "GridSpec",
    "ProblemSpec",
    "SolverSpec",
]
