"""Tests for GF4/1 and CSV field files and problem documents"""
import json

import numpy as np
import pytest

from goursat4d.core.grid import AXES, Field, make_grid, unit_grid
from goursat4d.models import MultiIndex
from goursat4d.schemas import BoundaryMode, BoundarySpec, FieldRef, GridSpec, ProblemSpec
from goursat4d.utils.field_io import (
    FieldFormatError,
    FieldIO,
    MagicMismatchError,
    NonFiniteValueError,
    SizeMismatchError,
)


def test_gf4_is_bitwise(tmp_path, rng):
    grid = unit_grid(3)
    field = Field(AXES, rng.normal(size=grid.shape()), grid)
    path = FieldIO.write_field(tmp_path / "u.gf4", field)
    back = FieldIO.read_field(path, grid)
    assert back.axes == AXES
    assert back.values.tobytes() == field.values.tobytes()


def test_gf4_header_layout(tmp_path):
    grid = unit_grid(3)
    field = Field((3, 4), np.arange(9.0), grid)
    data = FieldIO.write_field(tmp_path / "f.gf4", field).read_bytes()
    header, payload = data.split(b"\n\n", 1)
    assert header.decode("ascii").splitlines() == ["GF4 1", "axes 3 4", "counts 3 3", "lengths 1.0 1.0"]
    assert len(payload) == 9 * 8
    assert np.frombuffer(payload, dtype="<f8").tolist() == list(range(9))


def test_gf4_without_grid_builds_one(tmp_path):
    grid = make_grid((1.0, 1.0, 2.0, 0.5), (3, 3, 5, 4))
    field = Field((3, 4), np.ones((5, 4)), grid)
    back = FieldIO.read_field(FieldIO.write_field(tmp_path / "f.gf4", field))
    assert back.grid.count(3) == 5 and back.grid.length(4) == 0.5
    assert back.grid.count(1) == 3


def test_truncated_payload(tmp_path):
    grid = unit_grid(3)
    path = FieldIO.write_field(tmp_path / "u.gf4", Field.zeros(grid))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(SizeMismatchError):
        FieldIO.read_field(path)


def test_wrong_magic(tmp_path):
    path = tmp_path / "bad.gf4"
    path.write_bytes(b"GF3 1\naxes 1\ncounts 3\nlengths 1.0\n\n" + bytes(24))
    with pytest.raises(MagicMismatchError):
        FieldIO.read_field(path)


def test_bad_header_line(tmp_path):
    path = tmp_path / "bad.gf4"
    path.write_bytes(b"GF4 1\naxes 1\nnodes 3\nlengths 1.0\n\n" + bytes(24))
    with pytest.raises(FieldFormatError):
        FieldIO.read_field(path)


def test_non_finite_payload(tmp_path):
    path = tmp_path / "nan.gf4"
    payload = np.array([0.0, np.nan, 1.0], dtype="<f8").tobytes()
    path.write_bytes(b"GF4 1\naxes 2\ncounts 3\nlengths 1.0\n\n" + payload)
    with pytest.raises(NonFiniteValueError):
        FieldIO.read_field(path)


def test_grid_mismatch(tmp_path):
    path = FieldIO.write_field(tmp_path / "u.gf4", Field.zeros(unit_grid(3)))
    with pytest.raises(SizeMismatchError):
        FieldIO.read_field(path, unit_grid(4))


def test_csv_keeps_full_precision(tmp_path, rng):
    grid = make_grid((1.0, 1.0, 1.0, 1.0), (3, 3, 4, 3))
    field = Field((2, 3), rng.normal(size=(3, 4)) / 3.0, grid)
    path = FieldIO.save_field(tmp_path, "f", field, "csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x2,x3,value"
    assert len(lines) == 13
    back = FieldIO.load_field(path, grid)
    assert back.axes == (2, 3)
    np.testing.assert_array_equal(back.values, field.values)


def test_load_problem(tmp_path):
    grid = unit_grid(4)
    x3x4 = Field.from_function(grid, (2, 3, 4), lambda x2, x3, x4: x3 * x4 + 0 * x2)
    FieldIO.write_field(tmp_path / "F.gf4", x3x4)
    spec = ProblemSpec(
        grid=GridSpec(counts=[4, 4, 4, 4]),
        coefficients={"0,0,1,1": 2.0},
        boundary=BoundarySpec(mode=BoundaryMode.CLASSICAL, fields={"F": FieldRef(file="F.gf4"), "rhs": 1.0}),
    )
    problem = FieldIO.load_problem(FieldIO.write_problem(tmp_path, spec))
    assert problem.mode is BoundaryMode.CLASSICAL
    assert problem.grid == grid
    np.testing.assert_array_equal(problem.classical.F.values, x3x4.values)
    assert problem.classical.S.max_abs() == 0.0
    assert problem.rhs.values.min() == 1.0
    assert problem.coefficients[MultiIndex(0, 0, 1, 1)].values.max() == 2.0
    assert len(problem.coefficients) == 1


def test_load_problem_nonclassical(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({
        "grid": {"counts": [3, 3, 3, 3], "lengths": [1, 2, 1, 1]},
        "boundary": {"fields": {"0,0,0,0": 1.5, "1,1,2,2": -1.0}},
        "solver": {"tol": 1e-12, "mode": "sweep"},
    }))
    problem = FieldIO.load_problem(path)
    assert problem.mode is BoundaryMode.NONCLASSICAL
    assert problem.phi[(0, 0, 0, 0)].values == 1.5
    assert problem.rhs.values.max() == -1.0
    assert problem.spec.solver.tol == 1e-12


@pytest.mark.parametrize("document", [
    {"grid": {"counts": [3, 3, 3]}},
    {"grid": {"counts": [3, 3, 3, 3]}, "coefficients": {"1,1,2,2": 1.0}},
    {"grid": {"counts": [3, 3, 3, 3]}, "boundary": {"mode": "classical", "fields": {"Q": 1.0}}},
    {"grid": {"counts": [3, 3, 3, 3]}, "boundary": {"fields": {"3,0,0,0": 1.0}}},
    {"grid": {"counts": [3, 3, 3, 3]}, "solver": {"p": 0.5}},
    {"grid": {"counts": [2, 3, 3, 3]}},
])
def test_invalid_problems(tmp_path, document):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(document))
    with pytest.raises(ValueError):
        FieldIO.load_problem(path)


def test_missing_field_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps({
        "grid": {"counts": [3, 3, 3, 3]},
        "coefficients": {"0,0,0,0": {"file": "missing.gf4"}},
    }))
    with pytest.raises(ValueError, match="not found"):
        FieldIO.load_problem(path)
