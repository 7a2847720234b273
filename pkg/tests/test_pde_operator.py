"""Tests for finite-difference bundles and the operator V_{1,1,2,2}"""
import math

import numpy as np
import pytest

from goursat4d.core.grid import AXES, Field, unit_grid
from goursat4d.models import ALL_INDICES, DOMINANT, CoefficientSet, MultiIndex
from goursat4d.services.pde_operator import PDEOperatorService
from goursat4d.services.representation import RepresentationService
from tests.conftest import constant_evector, random_coefficients


def field_of(grid, fn):
    return Field.from_function(grid, AXES, fn)


def test_bundle_of_constant(grid5):
    bundle = PDEOperatorService.finite_diff_bundle(Field.constant(grid5, AXES, 2.0))
    for index, field in bundle.items():
        expected = 2.0 if index == MultiIndex(0, 0, 0, 0) else 0.0
        np.testing.assert_allclose(field.values, expected, atol=1e-10)


def test_bundle_of_poly_sep(grid5):
    """The dominant derivative of x1 x2 x3^2 x4^2 / 4 is exactly 1"""
    u = field_of(grid5, lambda x1, x2, x3, x4: x1 * x2 * x3 ** 2 * x4 ** 2 / 4)
    bundle = PDEOperatorService.finite_diff_bundle(u)
    np.testing.assert_allclose(bundle[DOMINANT].values, 1.0, atol=1e-9)


def test_bundle_of_x3(grid5):
    u = field_of(grid5, lambda x1, x2, x3, x4: x3 + 0 * x1)
    bundle = PDEOperatorService.finite_diff_bundle(u)
    for index, field in bundle.items():
        if index == MultiIndex(0, 0, 0, 0):
            np.testing.assert_allclose(field.values, u.values)
        elif index == MultiIndex(0, 0, 1, 0):
            np.testing.assert_allclose(field.values, 1.0, atol=1e-12)
        else:
            np.testing.assert_allclose(field.values, 0.0, atol=1e-10)


def test_bundle_needs_four_nodes():
    with pytest.raises(ValueError):
        PDEOperatorService.finite_diff_bundle(Field.zeros(unit_grid(3)))


def test_apply_V1122_examples(grid5):
    poly = field_of(grid5, lambda x1, x2, x3, x4: x1 * x2 * x3 ** 2 * x4 ** 2 / 4)
    image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(poly), CoefficientSet.zeros(grid5))
    np.testing.assert_allclose(image.values, 1.0, atol=1e-9)

    a = CoefficientSet(grid5, {(0, 0, 0, 0): 1.0})
    image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(Field.constant(grid5, AXES, 3.0)), a)
    np.testing.assert_allclose(image.values, 3.0, atol=1e-9)

    a = CoefficientSet(grid5, {(0, 0, 1, 1): 2.0})
    u = field_of(grid5, lambda x1, x2, x3, x4: x3 * x4 + 0 * x1)
    image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), a)
    np.testing.assert_allclose(image.values, 2.0, atol=1e-9)


def test_apply_V1122_grid_mismatch(grid5, grid4):
    bundle = PDEOperatorService.finite_diff_bundle(Field.zeros(grid4))
    with pytest.raises(ValueError):
        PDEOperatorService.apply_V1122(bundle, CoefficientSet.zeros(grid5))


def test_apply_V1122_is_linear(grid5, rng):
    a = random_coefficients(grid5, rng)
    u1 = Field(AXES, rng.uniform(-1, 1, grid5.shape()), grid5)
    u2 = Field(AXES, rng.uniform(-1, 1, grid5.shape()), grid5)

    def V(u):
        return PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), a).values

    np.testing.assert_allclose(V(0.3 * u1 + u2 * -1.5), 0.3 * V(u1) - 1.5 * V(u2), rtol=1e-9, atol=1e-7)


def test_polynomial_with_polynomial_coefficients(grid5):
    """x3^2 x4 with a_0010 = x1 and a_0020 = x2 + 1"""
    u = field_of(grid5, lambda x1, x2, x3, x4: x3 ** 2 * x4 + 0 * x1 * x2)
    a = CoefficientSet(grid5, {
        (0, 0, 1, 0): field_of(grid5, lambda x1, x2, x3, x4: x1 + 0 * x2 * x3 * x4),
        (0, 0, 2, 0): field_of(grid5, lambda x1, x2, x3, x4: x2 + 1 + 0 * x1 * x3 * x4),
    })
    image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), a)
    expected = field_of(grid5, lambda x1, x2, x3, x4: x1 * 2 * x3 * x4 + (x2 + 1) * 2 * x4)
    np.testing.assert_allclose(image.values, expected.values, atol=1e-8)


def test_apply_problem_operator_inverts_Q(rng):
    """V applied to Q b reproduces the boundary slots of b and Vu in the dominant slot"""
    grid = unit_grid(7)
    b = constant_evector(grid, rng)
    a = CoefficientSet.constant(grid, 0.25)
    u = RepresentationService.apply_Q(b)
    image = PDEOperatorService.apply_problem_operator(u, a)
    for index in ALL_INDICES[:-1]:
        np.testing.assert_allclose(image[index].values, b[index].values, atol=1e-8)
    expected = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), a)
    np.testing.assert_array_equal(image.dominant.values, expected.values)


def test_coefficient_profile(grid5):
    """Axes with i_k = m_k use the sup norm, the others L_p"""
    step = field_of(grid5, lambda x1, x2, x3, x4: np.where(x1 < 0.5, 1.0, 3.0) + 0 * x2 * x3 * x4)
    a = CoefficientSet(grid5, {(1, 0, 0, 0): step, (0, 0, 0, 0): step, (0, 1, 1, 1): 2.0})
    profile = PDEOperatorService.coefficient_profile(a, p=2.0)
    assert profile[MultiIndex(1, 0, 0, 0)] == pytest.approx(3.0)
    # trapezoid integral of step^2 over x1: 0.125 * 1 + 0.25 * 1 + 0.25 * 9 + 0.25 * 9 + 0.125 * 9
    assert profile[MultiIndex(0, 0, 0, 0)] == pytest.approx(math.sqrt(0.375 + 5.625))
    assert profile[MultiIndex(0, 1, 1, 1)] == pytest.approx(2.0)
