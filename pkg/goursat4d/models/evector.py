"""Elements of the data space E_p^(1,1,2,2): one trace field per multi-index"""
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

import numpy as np

from goursat4d.core.grid import Field, Grid4
from goursat4d.models.multi_index import ALL_INDICES, DOMINANT, MultiIndex

ComponentLike = Union[Field, np.ndarray, float, int]


def as_component(grid: Grid4, index: MultiIndex, value: ComponentLike) -> Field:
    """Coerce a field, an array or a constant to the trace field of `index`"""
    axes = index.free_axes
    if isinstance(value, Field):
        if value.grid != grid:
            raise ValueError(f"Component {index} lives on a different grid")
        if value.axes != axes:
            raise ValueError(f"Component {index} must vary over axes {axes}, got {value.axes}")
        return value
    if np.ndim(value) == 0:
        return Field.constant(grid, axes, float(value))
    return Field(axes, np.asarray(value, dtype=np.float64), grid)


class EVector:
    """The 36-component vector (phi_dominant, phi_0000, ..., phi_1022)

    Component i is a Field over exactly the axes k with i_k = m_k; missing
    components are zero.
    """

    def __init__(self, grid: Grid4, components: Optional[Mapping[MultiIndex, ComponentLike]] = None):
        self.grid = grid
        self._components: Dict[MultiIndex, Field] = {}
        for index, value in (components or {}).items():
            index = MultiIndex.of(index)
            self._components[index] = as_component(grid, index, value)

    @classmethod
    def zeros(cls, grid: Grid4) -> "EVector":
        return cls(grid)

    def __getitem__(self, index) -> Field:
        index = MultiIndex.of(index)
        field = self._components.get(index)
        return field if field is not None else Field.zeros(self.grid, index.free_axes)

    def __contains__(self, index) -> bool:
        return MultiIndex.of(index) in self._components

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(ALL_INDICES)

    def items(self) -> Iterator[Tuple[MultiIndex, Field]]:
        for index in ALL_INDICES:
            yield index, self[index]

    def nonzero_items(self) -> Iterator[Tuple[MultiIndex, Field]]:
        for index in ALL_INDICES:
            field = self._components.get(index)
            if field is not None and np.any(field.values):
                yield index, field

    @property
    def dominant(self) -> Field:
        return self[DOMINANT]

    def with_component(self, index, value: ComponentLike) -> "EVector":
        components = dict(self._components)
        components[MultiIndex.of(index)] = value
        return EVector(self.grid, components)

    def boundary(self) -> "EVector":
        """Copy with the dominant slot zeroed"""
        return EVector(self.grid, {i: f for i, f in self._components.items() if not i.is_dominant})

    def _combine(self, other: "EVector", op) -> "EVector":
        if self.grid != other.grid:
            raise ValueError("EVectors live on different grids")
        return EVector(self.grid, {i: op(self[i].values, other[i].values) for i in ALL_INDICES})

    def __add__(self, other: "EVector") -> "EVector":
        return self._combine(other, np.add)

    def __sub__(self, other: "EVector") -> "EVector":
        return self._combine(other, np.subtract)

    def __mul__(self, scale: float) -> "EVector":
        return EVector(self.grid, {i: f.values * float(scale) for i, f in self._components.items()})

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max((f.max_abs() for f in self._components.values()), default=0.0)

    def component_errors(self, other: "EVector") -> Dict[MultiIndex, float]:
        """Max absolute difference per component"""
        return {i: float(np.max(np.abs(self[i].values - other[i].values), initial=0.0)) for i in ALL_INDICES}
