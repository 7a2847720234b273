"""Problem specification documents"""
import math
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from goursat4d.schemas.common import BoundaryMode, IterationMode, QuadratureRule

RHS_KEY = "rhs"
CLASSICAL_COMPONENTS = ("F", "g", "psi", "Phi", "T", "S")


def parse_index(key: str):
    # Imported here: the models import the grid, which imports these schemas.
    from goursat4d.models.multi_index import MultiIndex

    return MultiIndex.of(key)


class FieldRef(BaseModel):
    """A field stored in a GF4 (or CSV) file, relative to the spec file"""
    file: str


FieldEntry = Union[float, FieldRef]


class GridSpec(BaseModel):
    lengths: List[float] = Field(default_factory=lambda: [1.0, 1.0, 1.0, 1.0])
    counts: List[int]

    @field_validator("lengths", "counts")
    @classmethod
    def check_four(cls, value: list) -> list:
        if len(value) != 4:
            raise ValueError(f"Expected four entries, got {len(value)}")
        return value


class BoundarySpec(BaseModel):
    """Boundary data in one of the two equivalent forms

    nonclassical: keys are multi-indices ("0,0,1,1"); "1,1,2,2" is the right-hand side.
    classical: keys are F, g, psi, Phi, T, S plus "rhs".
    Missing entries are zero.
    """
    mode: BoundaryMode = BoundaryMode.NONCLASSICAL
    fields: Dict[str, FieldEntry] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_keys(self) -> "BoundarySpec":
        for key in self.fields:
            if self.mode is BoundaryMode.CLASSICAL:
                if key not in CLASSICAL_COMPONENTS and key != RHS_KEY:
                    raise ValueError(f"Invalid classical component: {key}")
            else:
                parse_index(key)
        return self


class SolverSpec(BaseModel):
    """Solver options; None falls back to the application settings"""
    p: Optional[float] = None
    tol: Optional[float] = None
    max_iter: Optional[int] = None
    rule: Optional[QuadratureRule] = None
    mode: Optional[IterationMode] = None

    @field_validator("p")
    @classmethod
    def check_p(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and (math.isnan(value) or value < 1):
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {value}")
        return value

    @field_validator("tol")
    @classmethod
    def check_tol(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError(f"tol must be positive, got {value}")
        return value

    @field_validator("max_iter")
    @classmethod
    def check_max_iter(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError(f"max_iter must be >= 1, got {value}")
        return value


class ProblemSpec(BaseModel):
    """Grid, coefficients, boundary data and solver settings of one problem"""
    grid: GridSpec
    coefficients: Dict[str, FieldEntry] = Field(default_factory=dict)
    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    solver: SolverSpec = Field(default_factory=SolverSpec)

    @field_validator("coefficients")
    @classmethod
    def check_coefficients(cls, value: Dict[str, FieldEntry]) -> Dict[str, FieldEntry]:
        for key in value:
            if parse_index(key).is_dominant:
                raise ValueError("The dominant derivative has unit coefficient and takes no entry")
        return value
