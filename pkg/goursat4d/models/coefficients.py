"""Coefficient sets of the operator V and bundles of mixed derivatives"""
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

import numpy as np

from goursat4d.core.grid import AXES, Field, Grid4
from goursat4d.models.multi_index import ALL_INDICES, BOUNDARY_INDICES, MultiIndex


class CoefficientSet:
    """a_i(x) sampled on the full grid, one per non-dominant multi-index; missing means zero"""

    def __init__(self, grid: Grid4, coefficients: Optional[Mapping[MultiIndex, Union[Field, np.ndarray, float]]] = None):
        self.grid = grid
        self._coefficients: Dict[MultiIndex, Field] = {}
        for index, value in (coefficients or {}).items():
            index = MultiIndex.of(index)
            if index.is_dominant:
                raise ValueError("The dominant derivative has unit coefficient and takes no a_i")
            if isinstance(value, Field):
                if value.grid != grid or value.axes != AXES:
                    raise ValueError(f"Coefficient {index} must be a 4D field on the problem grid")
                field = value
            elif np.ndim(value) == 0:
                field = Field.constant(grid, AXES, float(value))
            else:
                field = Field(AXES, np.asarray(value, dtype=np.float64), grid)
            self._coefficients[index] = field

    @classmethod
    def zeros(cls, grid: Grid4) -> "CoefficientSet":
        return cls(grid)

    @classmethod
    def constant(cls, grid: Grid4, value: float) -> "CoefficientSet":
        return cls(grid, {index: value for index in BOUNDARY_INDICES})

    def __getitem__(self, index) -> Field:
        index = MultiIndex.of(index)
        field = self._coefficients.get(index)
        return field if field is not None else Field.zeros(self.grid)

    def __contains__(self, index) -> bool:
        return MultiIndex.of(index) in self._coefficients

    def __len__(self) -> int:
        return len(self._coefficients)

    def items(self) -> Iterator[Tuple[MultiIndex, Field]]:
        """Present coefficients in canonical index order"""
        for index in BOUNDARY_INDICES:
            if index in self._coefficients:
                yield index, self._coefficients[index]

    def nonzero_items(self) -> Iterator[Tuple[MultiIndex, Field]]:
        for index, field in self.items():
            if np.any(field.values):
                yield index, field


class DerivativeBundle:
    """Every mixed derivative D^i u, i in the order profile, on the full grid"""

    def __init__(self, grid: Grid4, derivatives: Mapping[MultiIndex, Union[Field, np.ndarray]]):
        self.grid = grid
        self._derivatives: Dict[MultiIndex, Field] = {}
        for index, value in derivatives.items():
            index = MultiIndex.of(index)
            field = value if isinstance(value, Field) else Field(AXES, value, grid)
            if field.grid != grid or field.axes != AXES:
                raise ValueError(f"Derivative {index} must be a 4D field on the bundle grid")
            self._derivatives[index] = field
        missing = [str(i) for i in ALL_INDICES if i not in self._derivatives]
        if missing:
            raise ValueError(f"Derivative bundle is missing indices {', '.join(missing)}")

    def __getitem__(self, index) -> Field:
        return self._derivatives[MultiIndex.of(index)]

    def items(self) -> Iterator[Tuple[MultiIndex, Field]]:
        for index in ALL_INDICES:
            yield index, self._derivatives[index]
