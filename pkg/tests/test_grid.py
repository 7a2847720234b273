"""Tests for grids, fields, cumulative quadrature and difference stencils"""
import math

import numpy as np
import pytest

from goursat4d.core.grid import (
    AXES,
    Field,
    boundary_stencil,
    cumulate,
    cumulative_integral,
    derivative_array,
    face_restrict,
    make_grid,
    mixed_derivative,
    unit_grid,
)
from goursat4d.schemas import QuadratureRule
from tests.conftest import cumulative_matrix


def test_make_grid_nodes():
    """Uniform nodes include both endpoints"""
    grid = make_grid((1, 1, 1, 1), (3, 3, 3, 3))
    np.testing.assert_array_equal(grid.nodes(1), [0.0, 0.5, 1.0])
    grid = make_grid((2, 1, 1, 1), (5, 3, 3, 3))
    np.testing.assert_array_equal(grid.nodes(1), [0.0, 0.5, 1.0, 1.5, 2.0])
    assert grid.nodes(1)[-1] == 2.0
    assert grid.spacing == (0.5, 0.5, 0.5, 0.5)


@pytest.mark.parametrize("lengths,counts", [
    ((1, 1, 1, 1), (2, 3, 3, 3)),
    ((0, 1, 1, 1), (3, 3, 3, 3)),
    ((1, -1, 1, 1), (3, 3, 3, 3)),
    ((1, 1, 1), (3, 3, 3)),
])
def test_make_grid_rejects_invalid(lengths, counts):
    """Counts below 3, non-positive lengths and wrong arity are invalid"""
    with pytest.raises(ValueError):
        make_grid(lengths, counts)


def test_field_validation(grid4):
    """Fields check their axes, their size and finiteness"""
    field = Field((3, 4), np.arange(16.0), grid4)
    assert field.values.shape == (4, 4)
    with pytest.raises(ValueError):
        Field((3, 4), np.zeros(15), grid4)
    with pytest.raises(ValueError):
        Field((4, 3), np.zeros((4, 4)), grid4)
    with pytest.raises(ValueError):
        Field((1,), [0.0, np.nan, 1.0, 2.0], grid4)
    with pytest.raises(ValueError):
        field.values[0, 0] = 1.0


def test_field2_from_nine_values():
    """A field over axes (3, 4) with 3 x 3 nodes takes nine values"""
    grid = unit_grid(3)
    field = Field((3, 4), np.arange(9.0), grid)
    assert field.dim == 2
    assert field.values[1, 2] == 5.0


def test_cumulative_integral_examples(grid5):
    """Constants and the identity integrate exactly"""
    one = Field.constant(grid5, AXES, 1.0)
    x1, x2, x3, x4 = grid5.coordinates()
    np.testing.assert_allclose(cumulative_integral(one, 1, 0).values, np.broadcast_to(x1, grid5.shape()), atol=1e-15)
    np.testing.assert_allclose(cumulative_integral(one, 3, 1).values,
                               np.broadcast_to(x3 ** 2 / 2, grid5.shape()), atol=1e-15)
    tau = Field.from_function(grid5, (1,), lambda x: x)
    np.testing.assert_allclose(cumulative_integral(tau, 1, 0).values, grid5.nodes(1) ** 2 / 2, rtol=1e-13)


def test_cumulative_integral_gains_axis(grid5):
    """Integrating along an absent axis adds it to the field"""
    f = Field.constant(grid5, (1, 2), 2.0)
    out = cumulative_integral(f, 4, 0)
    assert out.axes == (1, 2, 4)
    np.testing.assert_allclose(out.values[1, 2, :], 2.0 * grid5.nodes(4))


@pytest.mark.parametrize("rule", list(QuadratureRule))
def test_cumulative_integral_vanishes_at_zero(box_grid, rng, rule):
    """Every output is zero on the x_k = 0 face"""
    f = Field(AXES, rng.uniform(-1, 1, box_grid.shape()), box_grid)
    for axis in AXES:
        for power in (0, 1):
            out = cumulative_integral(f, axis, power, rule)
            assert np.all(face_restrict(out, {axis: 0.0}).values == 0.0)


@pytest.mark.parametrize("power", [0, 1])
def test_prefix_sweep_matches_naive_sum(rng, power):
    """The prefix sweep agrees with the O(n^2) weighted sum"""
    grid = make_grid((1.3, 1, 1, 1), (6, 6, 6, 6))
    values = rng.uniform(-1, 1, grid.shape())
    for pos, axis in enumerate(AXES):
        naive = np.moveaxis(np.tensordot(cumulative_matrix(grid.nodes(axis), power),
                                         np.moveaxis(values, pos, 0), axes=1), 0, pos)
        np.testing.assert_allclose(cumulate(values, pos, grid.nodes(axis), power), naive, atol=1e-12)


def test_cumulative_integral_linear_and_commuting(box_grid, rng):
    """Linearity and discrete Fubini"""
    f = Field(AXES, rng.uniform(-1, 1, box_grid.shape()), box_grid)
    g = Field(AXES, rng.uniform(-1, 1, box_grid.shape()), box_grid)
    lhs = cumulative_integral(2.0 * f + (-3.0) * g, 2, 1)
    rhs = 2.0 * cumulative_integral(f, 2, 1) + (-3.0) * cumulative_integral(g, 2, 1)
    np.testing.assert_allclose(lhs.values, rhs.values, atol=1e-13)
    a = cumulative_integral(cumulative_integral(f, 1, 0), 3, 1)
    b = cumulative_integral(cumulative_integral(f, 3, 1), 1, 0)
    np.testing.assert_allclose(a.values, b.values, atol=1e-13)


def test_rectangle_rule_is_strictly_causal(grid5):
    """Left rectangles never read the node being computed"""
    values = np.zeros(5)
    values[2] = 1.0
    out = cumulate(values, 0, grid5.nodes(1), 0, QuadratureRule.RECT)
    np.testing.assert_array_equal(out, [0.0, 0.0, 0.0, 0.25, 0.25])


def test_prefix_sweep_is_causal(rng):
    """Changing the tail leaves the prefix bitwise unchanged"""
    nodes = np.linspace(0.0, 1.0, 9)
    values = rng.uniform(-1, 1, 9)
    changed = values.copy()
    changed[5:] = rng.uniform(-1, 1, 4)
    for power in (0, 1):
        a = cumulate(values, 0, nodes, power)
        b = cumulate(changed, 0, nodes, power)
        np.testing.assert_array_equal(a[:5], b[:5])


def test_kernel_power_bounds():
    with pytest.raises(ValueError):
        cumulate(np.zeros(4), 0, np.linspace(0, 1, 4), 2)


def test_single_node_integrates_to_zero():
    """A one-node prefix box (the first x1 slab of a sweep) has no integral"""
    values = np.ones((1, 3))
    for rule in QuadratureRule:
        for power in (0, 1):
            out = cumulate(values, 0, np.zeros(1), power, rule)
            assert out.shape == (1, 3)
            assert not np.any(out)


def test_face_restrict_examples(grid5):
    """Restriction copies the hyperplane values"""
    f = Field.from_function(grid5, AXES, lambda x1, x2, x3, x4: x3 * x4)
    assert face_restrict(f, {3: 0.0}).max_abs() == 0.0
    at_x1 = face_restrict(f, {1: 0.0})
    assert at_x1.axes == (2, 3, 4)
    np.testing.assert_allclose(at_x1.values, np.broadcast_to(np.outer(grid5.nodes(3), grid5.nodes(4)), (5, 5, 5)))
    c = Field.constant(grid5, AXES, 3.5)
    restricted = face_restrict(c, {2: 0.0, 4: 0.0})
    assert restricted.axes == (1, 3)
    assert np.all(restricted.values == 3.5)
    top = face_restrict(f, {4: 1.0})
    np.testing.assert_allclose(top.values[0, 0, :], grid5.nodes(3))
    with pytest.raises(ValueError):
        face_restrict(f, {4: 0.3})


def test_derivative_stencils_exact_on_low_degree():
    """First derivatives are exact on quadratics, second on cubics"""
    x = np.linspace(0.0, 2.0, 6)
    h = x[1] - x[0]
    np.testing.assert_allclose(derivative_array(3 * x ** 2 - x, 0, h, 1), 6 * x - 1, atol=1e-12)
    np.testing.assert_allclose(derivative_array(x ** 3 - 2 * x ** 2, 0, h, 2), 6 * x - 4, atol=1e-10)


def test_derivative_stencils_need_enough_nodes():
    with pytest.raises(ValueError):
        derivative_array(np.zeros(3), 0, 0.5, 2)
    with pytest.raises(ValueError):
        derivative_array(np.zeros(4), 0, 0.5, 3)


def test_boundary_stencils_are_exact_and_quiet():
    """Wide one-sided weights stay exact on cubics and amplify sample noise less"""
    offsets = np.arange(6.0)
    for order in (1, 2):
        weights = boundary_stencil(order, 6)
        for degree in range(4):
            expected = math.factorial(order) if degree == order else 0.0
            assert weights @ offsets ** degree == pytest.approx(expected, abs=1e-12)
    assert np.linalg.norm(boundary_stencil(2, 6)) < np.linalg.norm([2.0, -5.0, 4.0, -1.0]) / 3.0
    assert np.linalg.norm(boundary_stencil(1, 6)) < np.linalg.norm([-1.5, 2.0, -0.5])
    # Short rows fall back to the compact stencils
    np.testing.assert_allclose(boundary_stencil(2, 4), [2.0, -5.0, 4.0, -1.0], atol=1e-12)
    np.testing.assert_allclose(boundary_stencil(1, 3), [-1.5, 2.0, -0.5], atol=1e-12)


def test_mixed_derivative_of_product():
    """D1 D3^2 of x1^2 x3^3 on a row long enough for the wide closures"""
    grid = make_grid((1.0, 1.0, 2.0, 1.0), (9, 3, 9, 3))
    x1, x2, x3, x4 = grid.coordinates()
    u = np.broadcast_to(x1 ** 2 * x3 ** 3 + 0 * x2 * x4, grid.shape())
    out = mixed_derivative(u, grid, [1, 0, 2, 0])
    assert out.dtype == np.float64
    np.testing.assert_allclose(out, np.broadcast_to(12 * x1 * x3 + 0 * x2 * x4, grid.shape()), atol=1e-9)
