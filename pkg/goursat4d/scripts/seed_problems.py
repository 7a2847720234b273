"""Script to write ready-to-run problem directories from the manufactured cases"""
import sys
from pathlib import Path
from typing import Dict, Sequence

import numpy as np

from goursat4d.core.grid import Field, make_grid
from goursat4d.schemas import RHS_KEY, BoundaryMode, BoundarySpec, FieldEntry, FieldRef, GridSpec, ProblemSpec
from goursat4d.services.mms import ManufacturedCase, ManufacturedCaseService
from goursat4d.utils.field_io import FieldIO

DEFAULT_CASES = ("zero", "poly-sep", "poly-const-coef", "trig", "jump-coef")


def field_entry(directory: Path, name: str, field: Field) -> FieldEntry:
    """Constant fields go inline, everything else to a GF4 file"""
    values = field.values
    if values.size and np.all(values == values.flat[0]):
        return float(values.flat[0])
    FieldIO.write_field(directory / f"{name}.gf4", field)
    return FieldRef(file=f"{name}.gf4")


def seed_case(case: ManufacturedCase, root: Path, counts: int, mode: BoundaryMode) -> Path:
    grid = make_grid((1.0, 1.0, 1.0, 1.0), (counts,) * 4)
    directory = root / f"{case.name}-{mode.value}"
    directory.mkdir(parents=True, exist_ok=True)

    coefficients: Dict[str, FieldEntry] = {}
    for index, field in case.coefficients(grid).nonzero_items():
        coefficients[index.label()] = field_entry(directory, f"a_{''.join(map(str, index))}", field)

    phi = case.phi(grid)
    fields: Dict[str, FieldEntry] = {}
    if mode is BoundaryMode.CLASSICAL:
        for name, field in case.classical(grid).as_dict().items():
            fields[name] = field_entry(directory, name, field)
        fields[RHS_KEY] = field_entry(directory, RHS_KEY, phi.dominant)
    else:
        for index, field in phi.nonzero_items():
            fields[index.label()] = field_entry(directory, f"phi_{''.join(map(str, index))}", field)

    spec = ProblemSpec(
        grid=GridSpec(lengths=list(grid.lengths), counts=list(grid.counts)),
        coefficients=coefficients,
        boundary=BoundarySpec(mode=mode, fields=fields),
    )
    return FieldIO.write_problem(directory, spec)


def seed_all(root: str = "examples_out", counts: int = 9, cases: Sequence[str] = DEFAULT_CASES) -> int:
    root_path = Path(root)
    written = 0
    try:
        for name in cases:
            case = ManufacturedCaseService.manufactured_case(name)
            for mode in BoundaryMode:
                path = seed_case(case, root_path, counts, mode)
                print(f"✓ Seeded {name} ({mode.value}) -> {path}")
                written += 1
        print(f"\n✓ Successfully seeded {written} problems on {counts}^4 grids under {root_path}")
    except ValueError as e:
        print(f"✗ Error seeding problems: {e}")
        raise
    return written


if __name__ == "__main__":
    seed_all(*(sys.argv[1:2] or ["examples_out"]), *(int(n) for n in sys.argv[2:3]))
