"""Classical Goursat data: values (and normal derivatives) of u on the faces x_k = 0"""
from dataclasses import dataclass, fields
from typing import Dict, NamedTuple, Tuple

from goursat4d.core.grid import Field, Grid4


class FaceSlot(NamedTuple):
    """Which face a classical component lives on and which normal derivative it carries"""
    fixed_axis: int
    normal_order: int
    axes: Tuple[int, ...]


CLASSICAL_SLOTS: Dict[str, FaceSlot] = {
    "F": FaceSlot(1, 0, (2, 3, 4)),    # u at x1 = 0
    "g": FaceSlot(2, 0, (1, 3, 4)),    # u at x2 = 0
    "psi": FaceSlot(3, 0, (1, 2, 4)),  # u at x3 = 0
    "Phi": FaceSlot(3, 1, (1, 2, 4)),  # D3 u at x3 = 0
    "T": FaceSlot(4, 0, (1, 2, 3)),    # u at x4 = 0
    "S": FaceSlot(4, 1, (1, 2, 3)),    # D4 u at x4 = 0
}


@dataclass(frozen=True)
class ClassicalData:
    F: Field
    g: Field
    psi: Field
    Phi: Field
    T: Field
    S: Field

    def __post_init__(self):
        grid = self.F.grid
        for name, slot in CLASSICAL_SLOTS.items():
            field = getattr(self, name)
            if field.grid != grid:
                raise ValueError(f"Classical component {name} lives on a different grid")
            if field.axes != slot.axes:
                raise ValueError(f"Classical component {name} must vary over {slot.axes}, got {field.axes}")

    @property
    def grid(self) -> Grid4:
        return self.F.grid

    @classmethod
    def zeros(cls, grid: Grid4) -> "ClassicalData":
        return cls(**{name: Field.zeros(grid, slot.axes) for name, slot in CLASSICAL_SLOTS.items()})

    def as_dict(self) -> Dict[str, Field]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def replace(self, **changes: Field) -> "ClassicalData":
        data = self.as_dict()
        data.update(changes)
        return ClassicalData(**data)

    def max_abs_difference(self, other: "ClassicalData") -> Dict[str, float]:
        return {name: (getattr(self, name) - getattr(other, name)).max_abs() for name in CLASSICAL_SLOTS}
