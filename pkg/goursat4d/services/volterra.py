"""The reduced Volterra equation N b = Z-hat and its successive-approximation solver"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from goursat4d.core.config import settings
from goursat4d.core.grid import AXES, Field, Grid4, cumulate
from goursat4d.models import (
    DOMINANT,
    ORDER_PROFILE,
    ClassicalData,
    CoefficientSet,
    EVector,
    MultiIndex,
    Solution,
)
from goursat4d.schemas.common import IterationMode, NormConfig, QuadratureRule, SolveReport
from goursat4d.services.norms import NormService
from goursat4d.services.representation import RepresentationService

logger = logging.getLogger(__name__)


def _integral_terms(values: np.ndarray, coefficients: Dict[MultiIndex, np.ndarray],
                    nodes: Sequence[np.ndarray], rule: QuadratureRule) -> np.ndarray:
    """sum_i a_i K_i b, where K_i integrates every axis with i_k < m_k

    Walks a depth-first tree of per-axis integration states, so only the arrays
    on the current path are alive and partial integrals are shared between terms.
    """
    out = np.zeros_like(values)
    wanted = set(coefficients)

    def walk(partial: np.ndarray, prefix: Tuple[int, ...]):
        depth = len(prefix)
        if depth == 4:
            np.add(out, coefficients[MultiIndex(*prefix)] * partial, out=out)
            return
        m = ORDER_PROFILE[depth]
        for i in range(m, -1, -1):
            head = prefix + (i,)
            if not any(index[:depth + 1] == head for index in wanted):
                continue
            remaining = m - i
            # Kernel (x_k - tau)^{r-1} / (r-1)! for r = m_k - i_k integrals.
            nxt = partial if remaining == 0 else cumulate(partial, depth, nodes[depth], remaining - 1, rule)
            walk(nxt, head)

    walk(values, ())
    return out


class VolterraService:
    """(N b)(x) = b(x) + sum_{i != dominant} a_i(x) (K_i b)(x) and the Picard solver"""

    @staticmethod
    def _coefficient_arrays(a: CoefficientSet) -> Dict[MultiIndex, np.ndarray]:
        return {index: field.values for index, field in a.nonzero_items()}

    @staticmethod
    def perturbation(b: Field, a: CoefficientSet, rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        """(N - I) b"""
        if b.grid != a.grid or b.axes != AXES:
            raise ValueError("b must be a 4D field on the coefficient grid")
        nodes = [b.grid.nodes(k) for k in AXES]
        values = _integral_terms(b.values, VolterraService._coefficient_arrays(a), nodes, rule)
        return Field(AXES, values, b.grid)

    @staticmethod
    def apply_N(b: Field, a: CoefficientSet, grid: Optional[Grid4] = None,
                rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        if grid is not None and (grid != b.grid or grid != a.grid):
            raise ValueError("b, coefficients and grid must agree")
        return b + VolterraService.perturbation(b, a, rule)

    @staticmethod
    def boundary_image(phi: EVector, a: CoefficientSet,
                       rule: QuadratureRule = QuadratureRule.TRAP) -> np.ndarray:
        """V_{1,1,2,2} g0 with analytic derivatives of g0; D^dominant g0 = 0"""
        if phi.grid != a.grid:
            raise ValueError("Boundary data and coefficients live on different grids")
        out = np.zeros(a.grid.shape())
        for index, coefficient in a.nonzero_items():
            out += coefficient.values * RepresentationService.g0_derivative(phi, index, rule=rule).values
        return out

    @staticmethod
    def build_rhs_Zhat(phi: EVector, a: CoefficientSet, grid: Optional[Grid4] = None,
                       rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
        """Z-hat = phi_dominant - V_{1,1,2,2} g0"""
        grid = grid or phi.grid
        if grid != phi.grid:
            raise ValueError("Boundary data does not live on the requested grid")
        values = phi.dominant.values - VolterraService.boundary_image(phi, a, rule)
        return Field(AXES, values, grid)

    @staticmethod
    def residual(b: Field, a: CoefficientSet, zhat: Field, p=None,
                 rule: QuadratureRule = QuadratureRule.TRAP) -> float:
        """||N b - Z-hat||_p"""
        p = settings.norm_p if p is None else p
        return NormService.lp_norm(VolterraService.apply_N(b, a, rule=rule) - zhat, p)

    @staticmethod
    def solve_picard(a: CoefficientSet, zhat: Field, grid: Optional[Grid4] = None,
                     tol: Optional[float] = None, max_iter: Optional[int] = None,
                     p=None, rule: Optional[QuadratureRule] = None,
                     mode: Optional[IterationMode] = None) -> Tuple[Field, SolveReport]:
        """Successive approximations b_{n+1} = Z - (N - I) b_n, b_0 = Z

        Stops once ||b_{n+1} - b_n||_p <= tol (1 + ||Z||_p). Running out of
        iterations (or overflowing) is reported, not raised.
        """
        tol = settings.tol if tol is None else tol
        max_iter = settings.max_iter if max_iter is None else max_iter
        config = NormConfig.of(settings.norm_p if p is None else p)
        rule = QuadratureRule(rule or settings.rule)
        mode = IterationMode(mode or settings.mode)
        if tol <= 0:
            raise ValueError(f"tol must be positive, got {tol}")
        if max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {max_iter}")
        if grid is not None and grid != zhat.grid:
            raise ValueError("Z-hat does not live on the requested grid")
        if zhat.grid != a.grid or zhat.axes != AXES:
            raise ValueError("Z-hat must be a 4D field on the coefficient grid")

        grid = zhat.grid
        z_norm = NormService.lp_norm(zhat, config)
        threshold = tol * (1.0 + z_norm)
        coefficients = VolterraService._coefficient_arrays(a)
        nodes = [grid.nodes(k) for k in AXES]

        if mode is IterationMode.SWEEP:
            values, updates, iterations, converged = VolterraService._sweep(
                zhat.values, coefficients, nodes, grid, threshold, max_iter, config, rule)
        else:
            values, updates, iterations, converged = VolterraService._picard(
                zhat.values, coefficients, nodes, grid, threshold, max_iter, config, rule)

        b = Field(AXES, values, grid)
        report = SolveReport(
            iterations=iterations,
            update_norms=updates,
            residual=VolterraService.residual(b, a, zhat, config, rule),
            converged=converged,
            mode=mode,
            stability_ratio=NormService.lp_norm(b, config) / z_norm if z_norm > 0 else 0.0,
        )
        if converged:
            logger.info("%s converged in %d iterations, residual %.3e",
                        mode.value, report.iterations, report.residual)
        else:
            logger.warning("%s did not converge in %d iterations, last update %.3e",
                           mode.value, report.iterations, report.last_update)
        return b, report

    @staticmethod
    def _update_norm(change: np.ndarray, grid: Grid4, config: NormConfig) -> float:
        if not np.all(np.isfinite(change)):
            return float("inf")
        if config.is_max:
            return float(np.max(np.abs(change), initial=0.0))
        return NormService.lp_norm(Field(AXES, change, grid), config)

    @staticmethod
    def _picard(zhat, coefficients, nodes, grid, threshold, max_iter, config, rule):
        b = np.array(zhat)
        updates: List[float] = []
        for iteration in range(1, max_iter + 1):
            new = zhat - _integral_terms(b, coefficients, nodes, rule)
            delta = VolterraService._update_norm(new - b, grid, config)
            updates.append(delta)
            logger.debug("iteration %d: update %.3e", iteration, delta)
            if not np.isfinite(delta):
                return b, updates, iteration, False
            b = new
            if delta <= threshold:
                return b, updates, iteration, True
        return b, updates, max_iter, False

    @staticmethod
    def _sweep(zhat, coefficients, nodes, grid, threshold, max_iter, config, rule):
        """Gauss-Seidel marching over x1 slabs

        Slab j only depends on slabs <= j, so it is iterated to convergence on
        the sub-box x1 <= x1_j while every earlier slab stays frozen.
        """
        b = np.array(zhat)
        per_slab: List[List[float]] = []
        for j in range(grid.count(1)):
            box = slice(0, j + 1)
            sub_coefficients = {index: values[box] for index, values in coefficients.items()}
            sub_nodes = [nodes[0][box]] + list(nodes[1:])
            slab_updates: List[float] = []
            converged = False
            for _ in range(max_iter):
                new_slab = zhat[j] - _integral_terms(b[box], sub_coefficients, sub_nodes, rule)[j]
                change = new_slab - b[j]
                if not np.all(np.isfinite(change)):
                    delta = float("inf")
                elif config.is_max:
                    delta = float(np.max(np.abs(change)))
                else:
                    # Slab contribution to the full-grid norm
                    weighted = np.abs(change) ** config.p
                    for axis in (4, 3, 2):
                        weighted = weighted @ grid.weights(axis)
                    delta = float(weighted * grid.weights(1)[j]) ** (1.0 / config.p)
                slab_updates.append(delta)
                if not np.isfinite(delta):
                    break
                b[j] = new_slab
                if delta <= threshold:
                    converged = True
                    break
            per_slab.append(slab_updates)
            logger.debug("slab %d: %d iterations", j, len(slab_updates))
            if not converged:
                iterations = max(len(u) for u in per_slab)
                return b, VolterraService._merge_updates(per_slab), iterations, False
        iterations = max(len(u) for u in per_slab)
        return b, VolterraService._merge_updates(per_slab), iterations, True

    @staticmethod
    def _merge_updates(per_slab: List[List[float]]) -> List[float]:
        """n-th entry: largest n-th update over all slabs (finished slabs count as 0)"""
        length = max(len(u) for u in per_slab)
        return [max(u[n] if n < len(u) else 0.0 for u in per_slab) for n in range(length)]

    @staticmethod
    def solve_problem(a: CoefficientSet, phi: EVector, grid: Optional[Grid4] = None,
                      tol: Optional[float] = None, max_iter: Optional[int] = None,
                      p=None, rule: Optional[QuadratureRule] = None,
                      mode: Optional[IterationMode] = None) -> Tuple[Solution, SolveReport]:
        """Z-hat, then b by successive approximations, then u = g0 + int R0 b"""
        rule = QuadratureRule(rule or settings.rule)
        zhat = VolterraService.build_rhs_Zhat(phi, a, grid, rule)
        b, report = VolterraService.solve_picard(a, zhat, grid, tol, max_iter, p, rule, mode)
        u = RepresentationService.apply_Q(phi.boundary().with_component(DOMINANT, b), rule=rule)
        return Solution(u=u, b=b, phi=phi), report

    @staticmethod
    def solve_classical(a: CoefficientSet, classical: ClassicalData, rhs: Field,
                        grid: Optional[Grid4] = None, **options) -> Tuple[Solution, SolveReport]:
        """Convert the classical data, insert rhs as the dominant trace, then solve"""
        from goursat4d.services.boundary_data import BoundaryDataService

        phi = BoundaryDataService.classical_to_nonclassical(classical).with_component(DOMINANT, rhs)
        return VolterraService.solve_problem(a, phi, grid, **options)

    @staticmethod
    def canonical_image(b: EVector, a: CoefficientSet,
                        rule: QuadratureRule = QuadratureRule.TRAP) -> EVector:
        """V Q b: boundary slots are b's own, dominant slot is N b_dominant + V g0"""
        dominant = VolterraService.apply_N(b.dominant, a, rule=rule).values
        return b.with_component(DOMINANT, dominant + VolterraService.boundary_image(b, a, rule))
