"""Pytest configuration and fixtures"""
from functools import reduce

import numpy as np
import pytest

from goursat4d.core.grid import AXES, Field, make_grid, unit_grid
from goursat4d.main import run_cli
from goursat4d.models import ALL_INDICES, BOUNDARY_INDICES, ORDER_PROFILE, CoefficientSet, EVector
from goursat4d.schemas import QuadratureRule


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: refinement studies on 17^4 and 33^4 grids")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid5():
    return unit_grid(5)


@pytest.fixture
def grid4():
    return unit_grid(4)


@pytest.fixture
def box_grid():
    """Non-cubic grid so axis mix-ups show"""
    return make_grid((2.0, 1.0, 1.5, 0.5), (5, 4, 6, 5))


def cumulative_matrix(nodes: np.ndarray, kernel_power: int,
                      rule: QuadratureRule = QuadratureRule.TRAP) -> np.ndarray:
    """Dense weights of int_0^{x_j} (x_j - tau)^p f(tau) dtau

    trap: h/2 at both ends of [0, x_j]. rect: h at every node left of x_j.
    """
    n = nodes.size
    h = nodes[1] - nodes[0]
    matrix = np.zeros((n, n))
    for j in range(1, n):
        if QuadratureRule(rule) is QuadratureRule.TRAP:
            matrix[j, :j + 1] = h
            matrix[j, 0] = matrix[j, j] = h / 2
        else:
            matrix[j, :j] = h
        if kernel_power == 1:
            matrix[j, :j + 1] *= nodes[j] - nodes[:j + 1]
    return matrix


def axis_matrix(grid, axis: int, remaining: int, rule=QuadratureRule.TRAP) -> np.ndarray:
    """Identity when nothing is integrated, otherwise the kernel (x - tau)^{r-1}"""
    nodes = grid.nodes(axis)
    if remaining == 0:
        return np.eye(nodes.size)
    return cumulative_matrix(nodes, remaining - 1, rule)


def dense_K(grid, index, rule=QuadratureRule.TRAP) -> np.ndarray:
    """K_i assembled as a Kronecker product of per-axis matrices (row-major, axis 4 fastest)"""
    mats = [axis_matrix(grid, k, m - i, rule) for k, i, m in zip(AXES, index, ORDER_PROFILE)]
    return reduce(np.kron, mats)


def dense_N(grid, a: CoefficientSet, rule=QuadratureRule.TRAP) -> np.ndarray:
    """I + sum_i diag(a_i) K_i"""
    matrix = np.eye(grid.size)
    for index, coefficient in a.nonzero_items():
        matrix += coefficient.values.ravel()[:, None] * dense_K(grid, index, rule)
    return matrix


def random_coefficients(grid, rng, low=-1.0, high=1.0) -> CoefficientSet:
    return CoefficientSet(grid, {i: rng.uniform(low, high, grid.shape()) for i in BOUNDARY_INDICES})


def constant_evector(grid, rng) -> EVector:
    return EVector(grid, {i: rng.uniform(-1.0, 1.0) for i in ALL_INDICES})


def linear_component(grid, index, rng) -> Field:
    """c0 + sum_k c_k x_k over the free axes of index"""
    axes = index.free_axes
    coeffs = rng.uniform(-1.0, 1.0, len(axes) + 1)
    return Field.from_function(
        grid, axes, lambda *xs: coeffs[0] + sum(c * x for c, x in zip(coeffs[1:], xs)))


@pytest.fixture
def cli(capsys):
    """Run the command line and return (exit code, key=value dict, raw stdout)"""
    def invoke(*argv):
        code = run_cli([str(a) for a in argv])
        out = capsys.readouterr().out
        values = {}
        for line in out.splitlines():
            if "=" in line and " " not in line.split("=", 1)[0]:
                key, value = line.split("=", 1)
                values[key] = value
        return code, values, out
    return invoke
