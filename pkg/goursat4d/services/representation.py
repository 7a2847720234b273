"""Integral representation u = Qb, its inverse (trace extraction) and the boundary function g0"""
import logging
from math import factorial
from typing import Optional, Sequence

import numpy as np

from goursat4d.core.grid import AXES, Field, Grid4, cumulate, mixed_derivative
from goursat4d.models import ALL_INDICES, BOUNDARY_INDICES, ORDER_PROFILE, EVector, MultiIndex
from goursat4d.schemas.common import QuadratureRule

logger = logging.getLogger(__name__)

ZERO = MultiIndex(0, 0, 0, 0)


class RepresentationService:
    """Term-by-term evaluation of

        (Qb)(x) = sum_i  prod_{k: i_k < m_k} x_k^{i_k}  *  (prod_{k: i_k = m_k} I_k) b_i

    where I_k integrates over (0, x_k) with kernel (x_k - tau)^{m_k - 1} / (m_k - 1)!.
    Differentiating a term peels integrals off (I_k loses one power per D_k) and
    differentiates the monomial factors, which is how g0 derivatives and the
    Volterra kernels K_i are produced.
    """

    @staticmethod
    def term(component: Field, source: MultiIndex, derivative: MultiIndex = ZERO,
             rule: QuadratureRule = QuadratureRule.TRAP) -> Optional[np.ndarray]:
        """D^derivative of the Q-term generated by component b_source; None when identically zero"""
        grid = component.grid
        scale = 1.0
        monomials = []
        for k, (j, i, m) in enumerate(zip(source, derivative, ORDER_PROFILE), start=1):
            if j < m:
                if i > j:
                    return None
                scale *= factorial(j) / factorial(j - i)
                if j - i:
                    monomials.append(grid.coordinate(k) ** (j - i))
        values = component.values
        for pos, k in enumerate(component.axes):
            remaining = ORDER_PROFILE[k - 1] - derivative[k - 1]
            if remaining > 0:
                values = cumulate(values, pos, grid.nodes(k), remaining - 1, rule)
        shape = [grid.count(k) if k in component.axes else 1 for k in AXES]
        out = values.reshape(shape) * scale
        for monomial in monomials:
            out = out * monomial
        return out

    @staticmethod
    def q_derivative(b: EVector, derivative: MultiIndex = ZERO,
                     rule: QuadratureRule = QuadratureRule.TRAP,
                     sources: Sequence[MultiIndex] = ALL_INDICES) -> np.ndarray:
        """D^derivative (Qb) on the full grid, summing only the given source terms"""
        grid = b.grid
        out = np.zeros(grid.shape())
        for source in sources:
            if source not in b:
                continue
            term = RepresentationService.term(b[source], source, derivative, rule)
            if term is not None:
                out += term
        return out

    @staticmethod
    def apply_Q(b: EVector, grid: Optional[Grid4] = None,
                rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        """u = Qb"""
        grid = grid or b.grid
        if grid != b.grid:
            raise ValueError("EVector does not live on the requested grid")
        return Field(AXES, RepresentationService.q_derivative(b, ZERO, rule), grid)

    @staticmethod
    def build_g0(phi: EVector, grid: Optional[Grid4] = None,
                 rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        """g0 = Q applied to the boundary part of phi"""
        return RepresentationService.apply_Q(phi.boundary(), grid, rule)

    @staticmethod
    def g0_derivative(phi: EVector, index, grid: Optional[Grid4] = None,
                      rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        """Analytic D^i g0 for a non-dominant i (D^dominant g0 vanishes identically)"""
        index = MultiIndex.of(index)
        if index.is_dominant:
            raise ValueError("The dominant derivative of g0 is identically zero and is not requested")
        grid = grid or phi.grid
        values = RepresentationService.q_derivative(phi, index, rule, sources=BOUNDARY_INDICES)
        return Field(AXES, values, grid)

    @staticmethod
    def kernel_R0(tau: Sequence[float], x: Sequence[float]) -> float:
        """R0(tau; x) = (x3 - tau3)(x4 - tau4) prod_k theta(x_k - tau_k), theta(0) = 0"""
        if len(tau) != 4 or len(x) != 4:
            raise ValueError("kernel_R0 takes two 4-points")
        if any(xk - tk <= 0 for tk, xk in zip(tau, x)):
            return 0.0
        return float((x[2] - tau[2]) * (x[3] - tau[3]))

    @staticmethod
    def trace(u: Field, index) -> Field:
        """D^i u restricted to the face where every axis with i_k < m_k is 0"""
        index = MultiIndex.of(index)
        if u.axes != AXES:
            raise ValueError("Traces are taken from 4D fields")
        grid = u.grid
        # Axes that are neither differentiated nor free can be cut before differencing.
        cut = tuple(k for k in index.fixed_axes if index[k - 1] == 0)
        values = u.values[tuple(0 if k in cut else slice(None) for k in AXES)]
        axes = tuple(k for k in AXES if k not in cut)
        values = mixed_derivative(values, grid, [index[k - 1] for k in axes], axes)
        remaining = tuple(k for k in index.fixed_axes if k not in cut)
        values = values[tuple(0 if k in remaining else slice(None) for k in axes)]
        return Field(index.free_axes, values, grid)

    @staticmethod
    def extract_EVector(u: Field, grid: Optional[Grid4] = None) -> EVector:
        """All 36 traces of u: component i = D^i u on the face {x_k = 0 : i_k < m_k}"""
        if grid is not None and grid != u.grid:
            raise ValueError("Field does not live on the requested grid")
        components = {index: RepresentationService.trace(u, index) for index in ALL_INDICES}
        logger.debug("Extracted %d traces on grid %s", len(components), u.grid.counts)
        return EVector(u.grid, components)
