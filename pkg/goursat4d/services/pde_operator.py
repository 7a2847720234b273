"""The differential operator V_{1,1,2,2} and finite-difference derivative bundles"""
import logging
from typing import Dict, Optional

import numpy as np

from goursat4d.core.grid import AXES, Field, Grid4, derivative_array
from goursat4d.models import DOMINANT, ORDER_PROFILE, CoefficientSet, DerivativeBundle, EVector, MultiIndex
from goursat4d.schemas.common import NormConfig
from goursat4d.services.norms import NormService
from goursat4d.services.representation import RepresentationService

logger = logging.getLogger(__name__)


class PDEOperatorService:
    """(V u)(x) = D1 D2 D3^2 D4^2 u + sum_{i != dominant} a_i(x) D^i u(x)"""

    @staticmethod
    def finite_diff_bundle(u: Field, grid: Optional[Grid4] = None) -> DerivativeBundle:
        """All 36 mixed derivatives of u by second-order finite differences"""
        grid = grid or u.grid
        if u.grid != grid or u.axes != AXES:
            raise ValueError("finite_diff_bundle needs a 4D field on the given grid")
        derivatives: Dict[MultiIndex, np.ndarray] = {}
        # Differentiate axis by axis so partial results are shared across indices.
        for i1 in range(ORDER_PROFILE[0] + 1):
            v1 = derivative_array(u.values, 0, grid.step(1), i1)
            for i2 in range(ORDER_PROFILE[1] + 1):
                v2 = derivative_array(v1, 1, grid.step(2), i2)
                for i3 in range(ORDER_PROFILE[2] + 1):
                    v3 = derivative_array(v2, 2, grid.step(3), i3)
                    for i4 in range(ORDER_PROFILE[3] + 1):
                        derivatives[MultiIndex(i1, i2, i3, i4)] = derivative_array(v3, 3, grid.step(4), i4)
        return DerivativeBundle(grid, derivatives)

    @staticmethod
    def apply_V1122(bundle: DerivativeBundle, a: CoefficientSet) -> Field:
        if bundle.grid != a.grid:
            raise ValueError("Derivative bundle and coefficients live on different grids")
        out = np.array(bundle[DOMINANT].values)
        for index, coefficient in a.nonzero_items():
            out += coefficient.values * bundle[index].values
        return Field(AXES, out, bundle.grid)

    @staticmethod
    def apply_problem_operator(u: Field, a: CoefficientSet) -> EVector:
        """Vu = (V_{1,1,2,2} u, the 35 traces of u)"""
        traces = RepresentationService.extract_EVector(u)
        image = PDEOperatorService.apply_V1122(PDEOperatorService.finite_diff_bundle(u), a)
        return traces.with_component(DOMINANT, image)

    @staticmethod
    def coefficient_profile(a: CoefficientSet, p=2.0) -> Dict[MultiIndex, float]:
        """Mixed norm of every coefficient in its anisotropic class

        a_i is measured with q_k = inf on axes where i_k = m_k and q_k = p elsewhere.
        """
        config = NormConfig.of(p)
        profile = {}
        for index, coefficient in a.items():
            exponents = [float("inf") if i == m else config.p for i, m in zip(index, ORDER_PROFILE)]
            profile[index] = NormService.mixed_norm(coefficient, exponents)
        return profile
