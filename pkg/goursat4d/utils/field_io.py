"""
Field and problem files.

GF4/1 layout: text header lines

    GF4 1
    axes 3 4
    counts 9 9
    lengths 1.0 1.0

then a blank line, then little-endian float64 values, row-major (last axis fastest).
CSV export writes one row per node: the node coordinates, then the value.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from goursat4d.core.grid import AXES, MIN_NODES, Field, Grid4, make_grid
from goursat4d.models import CLASSICAL_SLOTS, ClassicalData, CoefficientSet, EVector, MultiIndex
from goursat4d.schemas import RHS_KEY, BoundaryMode, FieldEntry, FieldFormat, FieldRef, ProblemSpec

logger = logging.getLogger(__name__)

MAGIC = "GF4 1"
HEADER_KEYS = ("axes", "counts", "lengths")
CSV_DIGITS = "%.17g"


class FieldFormatError(ValueError):
    """Malformed field file"""


class MagicMismatchError(FieldFormatError):
    """The file does not start with the GF4/1 magic line"""


class SizeMismatchError(FieldFormatError):
    """Payload size (or grid) disagrees with the header"""


class NonFiniteValueError(FieldFormatError):
    """NaN or infinity in the payload"""


@dataclass(frozen=True)
class Problem:
    """A problem file resolved against its grid"""
    spec: ProblemSpec
    grid: Grid4
    coefficients: CoefficientSet
    rhs: Field
    phi: Optional[EVector] = None
    classical: Optional[ClassicalData] = None

    @property
    def mode(self) -> BoundaryMode:
        return self.spec.boundary.mode


class FieldIO:
    """Reading and writing fields, and loading problem specifications"""

    @staticmethod
    def _resolve_grid(axes: Sequence[int], counts: Sequence[int], lengths: Sequence[float],
                      grid: Optional[Grid4]) -> Grid4:
        if grid is None:
            full_counts = [MIN_NODES] * 4
            full_lengths = [1.0] * 4
            for k, n, h in zip(axes, counts, lengths):
                full_counts[k - 1] = n
                full_lengths[k - 1] = h
            return make_grid(full_lengths, full_counts)
        for k, n, h in zip(axes, counts, lengths):
            if grid.count(k) != n or not np.isclose(grid.length(k), h):
                raise SizeMismatchError(
                    f"Axis {k} of the file has {n} nodes over {h}, the grid has "
                    f"{grid.count(k)} nodes over {grid.length(k)}")
        return grid

    @staticmethod
    def write_field(path: Union[str, Path], field: Field) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = "\n".join([
            MAGIC,
            " ".join(["axes"] + [str(k) for k in field.axes]),
            " ".join(["counts"] + [str(field.grid.count(k)) for k in field.axes]),
            " ".join(["lengths"] + [repr(field.grid.length(k)) for k in field.axes]),
        ])
        payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
        path.write_bytes(header.encode("ascii") + b"\n\n" + payload)
        logger.debug("Wrote %s (axes %s)", path, field.axes)
        return path

    @staticmethod
    def read_field(path: Union[str, Path], grid: Optional[Grid4] = None) -> Field:
        """Parse a GF4/1 file; with `grid` given the header must agree with it"""
        data = Path(path).read_bytes()
        if data.split(b"\n", 1)[0].strip() != MAGIC.encode("ascii"):
            raise MagicMismatchError(f"{path} is not a GF4/1 file")
        end = data.find(b"\n\n")
        if end < 0:
            raise FieldFormatError(f"{path}: header is not terminated by a blank line")
        header: Dict[str, List[str]] = {}
        for line in data[:end].decode("ascii", errors="replace").split("\n")[1:]:
            tokens = line.split()
            if not tokens or tokens[0] not in HEADER_KEYS:
                raise FieldFormatError(f"{path}: invalid header line {line!r}")
            header[tokens[0]] = tokens[1:]
        if set(header) != set(HEADER_KEYS):
            raise FieldFormatError(f"{path}: header needs {', '.join(HEADER_KEYS)}")
        try:
            axes = tuple(int(k) for k in header["axes"])
            counts = [int(n) for n in header["counts"]]
            lengths = [float(h) for h in header["lengths"]]
        except ValueError as exc:
            raise FieldFormatError(f"{path}: invalid header value ({exc})") from exc
        if not len(axes) == len(counts) == len(lengths):
            raise FieldFormatError(f"{path}: axes, counts and lengths differ in length")

        payload = data[end + 2:]
        expected = 8 * int(np.prod(counts, dtype=np.int64))
        if len(payload) != expected:
            raise SizeMismatchError(f"{path}: expected {expected} payload bytes, found {len(payload)}")
        values = np.frombuffer(payload, dtype="<f8").reshape(counts)
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError(f"{path}: payload contains non-finite values")
        grid = FieldIO._resolve_grid(axes, counts, lengths, grid)
        logger.debug("Read %s (axes %s)", path, axes)
        return Field(axes, values.astype(np.float64), grid)

    @staticmethod
    def write_csv(path: Union[str, Path], field: Field) -> Path:
        """x_k columns for every axis of the field, then the value; 17 significant digits"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        coords = np.meshgrid(*(field.grid.nodes(k) for k in field.axes), indexing="ij")
        table = np.column_stack([c.ravel() for c in coords] + [field.values.ravel()])
        header = ",".join([f"x{k}" for k in field.axes] + ["value"])
        np.savetxt(path, table, fmt=CSV_DIGITS, delimiter=",", header=header, comments="")
        return path

    @staticmethod
    def read_csv(path: Union[str, Path], grid: Optional[Grid4] = None) -> Field:
        path = Path(path)
        with path.open("r", encoding="utf-8") as f:
            names = f.readline().strip().split(",")
        if not names or names[-1] != "value" or any(not n.startswith("x") for n in names[:-1]):
            raise FieldFormatError(f"{path}: expected header x<k>,...,value")
        try:
            axes = tuple(int(n[1:]) for n in names[:-1])
        except ValueError as exc:
            raise FieldFormatError(f"{path}: invalid column name ({exc})") from exc
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if table.shape[1] != len(names):
            raise SizeMismatchError(f"{path}: expected {len(names)} columns, found {table.shape[1]}")
        counts = [np.unique(table[:, pos]).size for pos in range(len(axes))]
        lengths = [float(table[:, pos].max()) for pos in range(len(axes))]
        if not np.all(np.isfinite(table[:, -1])):
            raise NonFiniteValueError(f"{path}: non-finite values")
        grid = FieldIO._resolve_grid(axes, counts, lengths, grid)
        return Field(axes, table[:, -1], grid)

    @staticmethod
    def load_field(path: Union[str, Path], grid: Optional[Grid4] = None) -> Field:
        """Read a field, choosing the format from the file suffix"""
        path = Path(path)
        if path.suffix.lower() == ".csv":
            return FieldIO.read_csv(path, grid)
        return FieldIO.read_field(path, grid)

    @staticmethod
    def save_field(directory: Union[str, Path], name: str, field: Field,
                   fmt: FieldFormat = FieldFormat.GF4) -> Path:
        fmt = FieldFormat(fmt)
        path = Path(directory) / f"{name}.{fmt.value}"
        if fmt is FieldFormat.CSV:
            return FieldIO.write_csv(path, field)
        return FieldIO.write_field(path, field)

    @staticmethod
    def _entry(entry: FieldEntry, axes: Sequence[int], grid: Grid4, base: Path, label: str) -> Field:
        if isinstance(entry, FieldRef):
            path = base / entry.file
            if not path.exists():
                raise ValueError(f"Field file for {label} not found: {path}")
            field = FieldIO.load_field(path, grid)
            if field.axes != tuple(axes):
                raise ValueError(f"{label} must vary over axes {tuple(axes)}, file has {field.axes}")
            return field
        return Field.constant(grid, axes, entry)

    @staticmethod
    def load_problem(path: Union[str, Path]) -> Problem:
        """Parse a ProblemSpec JSON document and resolve its field references"""
        path = Path(path)
        spec = ProblemSpec.model_validate(json.loads(path.read_text(encoding="utf-8")))
        base = path.parent
        grid = make_grid(spec.grid.lengths, spec.grid.counts)
        coefficients = CoefficientSet(grid, {
            MultiIndex.of(key): FieldIO._entry(entry, AXES, grid, base, f"a{MultiIndex.of(key)}")
            for key, entry in spec.coefficients.items()
        })
        fields = spec.boundary.fields
        if spec.boundary.mode is BoundaryMode.CLASSICAL:
            classical = ClassicalData(**{
                name: FieldIO._entry(fields.get(name, 0.0), slot.axes, grid, base, name)
                for name, slot in CLASSICAL_SLOTS.items()
            })
            rhs = FieldIO._entry(fields.get(RHS_KEY, 0.0), AXES, grid, base, RHS_KEY)
            problem = Problem(spec, grid, coefficients, rhs, classical=classical)
        else:
            components = {}
            for key, entry in fields.items():
                index = MultiIndex.of(key)
                components[index] = FieldIO._entry(entry, index.free_axes, grid, base, f"phi{index}")
            phi = EVector(grid, components)
            problem = Problem(spec, grid, coefficients, phi.dominant, phi=phi)
        logger.info("Loaded %s problem on grid %s from %s", problem.mode.value, grid.counts, path)
        return problem

    @staticmethod
    def write_problem(directory: Union[str, Path], spec: ProblemSpec, name: str = "problem.json") -> Path:
        path = Path(directory) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(spec.model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
        return path
