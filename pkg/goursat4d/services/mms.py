"""Manufactured solutions: closed-form cases, derived problem data, errors and refinement studies"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from goursat4d.core.config import settings
from goursat4d.core.grid import AXES, Field, Grid4, make_grid
from goursat4d.models import (
    ALL_INDICES,
    BOUNDARY_INDICES,
    DOMINANT,
    ClassicalData,
    CoefficientSet,
    DerivativeBundle,
    EVector,
    MultiIndex,
    Solution,
)
from goursat4d.schemas.common import BoundaryMode, ConvergenceRow, ErrorMetrics, NormConfig, SolveReport
from goursat4d.services.boundary_data import BoundaryDataService
from goursat4d.services.norms import NormService
from goursat4d.services.pde_operator import PDEOperatorService
from goursat4d.services.volterra import VolterraService

logger = logging.getLogger(__name__)

# Errors below this are treated as exact and get no observed order.
ROUNDOFF_ERROR = 1e-12


class AxisFactor(NamedTuple):
    """A function of one coordinate with its first two derivatives"""
    derivatives: Tuple[Callable, Callable, Callable]

    @classmethod
    def polynomial(cls, *coefficients: float) -> "AxisFactor":
        p = Polynomial(coefficients)
        return cls((p, p.deriv(1), p.deriv(2)))

    @classmethod
    def sine(cls) -> "AxisFactor":
        return cls((np.sin, np.cos, lambda x: -np.sin(x)))


class SeparableTerm(NamedTuple):
    scale: float
    factors: Tuple[AxisFactor, AxisFactor, AxisFactor, AxisFactor]


@dataclass(frozen=True)
class ManufacturedCase:
    """u = sum of separable terms, with its coefficient set; everything else is derived"""
    name: str
    description: str
    terms: Tuple[SeparableTerm, ...]
    coefficient_builder: Callable[[Grid4], CoefficientSet]

    def value(self, index, *coords) -> np.ndarray:
        """D^index u at points (x1, x2, x3, x4); arguments broadcast"""
        index = MultiIndex.of(index)
        total = np.zeros(np.broadcast(*coords).shape)
        for term in self.terms:
            product = term.scale
            for factor, order, x in zip(term.factors, index, coords):
                product = product * factor.derivatives[order](x)
            total = total + product
        return total

    def sample(self, grid: Grid4, index=DOMINANT) -> Field:
        """D^index u on the full grid"""
        return Field(AXES, np.broadcast_to(self.value(index, *grid.coordinates()), grid.shape()), grid)

    def trace(self, grid: Grid4, index) -> Field:
        """D^index u on the face where every axis with i_k < m_k is 0"""
        index = MultiIndex.of(index)
        axes = index.free_axes
        coords = [grid.coordinate(k, axes) if k in axes else 0.0 for k in AXES]
        return Field(axes, np.broadcast_to(self.value(index, *coords), grid.shape(axes)), grid)

    def coefficients(self, grid: Grid4) -> CoefficientSet:
        return self.coefficient_builder(grid)

    def bundle(self, grid: Grid4) -> DerivativeBundle:
        """Analytic derivative bundle sampled at the nodes"""
        return DerivativeBundle(grid, {index: self.sample(grid, index) for index in ALL_INDICES})

    def phi(self, grid: Grid4) -> EVector:
        """Boundary traces of u plus phi_dominant = V_{1,1,2,2} u"""
        components = {index: self.trace(grid, index) for index in BOUNDARY_INDICES}
        components[DOMINANT] = PDEOperatorService.apply_V1122(self.bundle(grid), self.coefficients(grid))
        return EVector(grid, components)

    def classical(self, grid: Grid4) -> ClassicalData:
        return BoundaryDataService.classical_from_function(
            self.sample(grid, (0, 0, 0, 0)),
            self.sample(grid, (0, 0, 1, 0)),
            self.sample(grid, (0, 0, 0, 1)),
        )

    def exact(self, grid: Grid4) -> Tuple[Field, Field]:
        """(u, b = D1 D2 D3^2 D4^2 u)"""
        return self.sample(grid, (0, 0, 0, 0)), self.sample(grid, DOMINANT)


def _poly_sep() -> Tuple[SeparableTerm, ...]:
    x = AxisFactor.polynomial(0.0, 1.0)
    half_square = AxisFactor.polynomial(0.0, 0.0, 0.5)
    return (SeparableTerm(1.0, (x, x, half_square, half_square)),)


def _jump_coefficients(grid: Grid4) -> CoefficientSet:
    middle = grid.length(1) / 2
    step = Field.from_function(grid, AXES, lambda x1, x2, x3, x4: np.where(x1 < middle, 1.0, 3.0))
    return CoefficientSet(grid, {MultiIndex(0, 0, 1, 1): step})


class ManufacturedCaseService:
    """Built-in manufactured cases and the studies run on them"""

    CASES: Dict[str, Dict] = {
        "zero": {
            "description": "u = 0, a = 0",
            "terms": (),
            "coefficients": CoefficientSet.zeros,
        },
        "poly-sep": {
            "description": "u = x1 x2 x3^2 x4^2 / 4, a = 0",
            "terms": _poly_sep(),
            "coefficients": CoefficientSet.zeros,
        },
        "poly-const-coef": {
            "description": "u = x1 x2 x3^2 x4^2 / 4, all 35 a_i = 1",
            "terms": _poly_sep(),
            "coefficients": lambda grid: CoefficientSet.constant(grid, 1.0),
        },
        "trig": {
            "description": "u = sin x1 sin x2 sin x3 sin x4, all 35 a_i = 0.5",
            "terms": (SeparableTerm(1.0, (AxisFactor.sine(),) * 4),),
            "coefficients": lambda grid: CoefficientSet.constant(grid, 0.5),
        },
        "jump-coef": {
            "description": "u = (x1^3/3) x2 (x3^3/6) (x4^2/2), a_0011 = 1 for x1 < h1/2 and 3 beyond",
            "terms": (SeparableTerm(1.0, (
                AxisFactor.polynomial(0.0, 0.0, 0.0, 1.0 / 3.0),
                AxisFactor.polynomial(0.0, 1.0),
                AxisFactor.polynomial(0.0, 0.0, 0.0, 1.0 / 6.0),
                AxisFactor.polynomial(0.0, 0.0, 0.5),
            )),),
            "coefficients": _jump_coefficients,
        },
    }

    @staticmethod
    def manufactured_case(name: str) -> ManufacturedCase:
        if name not in ManufacturedCaseService.CASES:
            raise ValueError(f"Unknown manufactured case: {name}")
        config = ManufacturedCaseService.CASES[name]
        return ManufacturedCase(name, config["description"], config["terms"], config["coefficients"])

    @staticmethod
    def solve_case(case: ManufacturedCase, grid: Grid4,
                   boundary: BoundaryMode = BoundaryMode.NONCLASSICAL,
                   **options) -> Tuple[Solution, SolveReport]:
        """Solve the case from its nonclassical data or through its classical data"""
        a = case.coefficients(grid)
        if BoundaryMode(boundary) is BoundaryMode.CLASSICAL:
            rhs = case.phi(grid).dominant
            return VolterraService.solve_classical(a, case.classical(grid), rhs, **options)
        return VolterraService.solve_problem(a, case.phi(grid), **options)

    @staticmethod
    def error_metrics(solution: Solution, case: ManufacturedCase, p=None) -> ErrorMetrics:
        config = NormConfig.of(settings.norm_p if p is None else p)
        u_exact, b_exact = case.exact(solution.grid)
        u_diff = solution.u - u_exact
        return ErrorMetrics(
            u_error=NormService.lp_norm(u_diff, config),
            b_error=NormService.lp_norm(solution.b - b_exact, config),
            max_error=u_diff.max_abs(),
        )

    @staticmethod
    def observed_order(coarse: ConvergenceRow, fine: ConvergenceRow) -> Optional[float]:
        """log(e_coarse / e_fine) / log(h_coarse / h_fine); None at round-off level"""
        if coarse.error <= ROUNDOFF_ERROR or fine.error <= ROUNDOFF_ERROR:
            return None
        return math.log(coarse.error / fine.error) / math.log(coarse.spacing / fine.spacing)

    @staticmethod
    def convergence_study(case: ManufacturedCase, grids: Sequence[int],
                          lengths: Sequence[float] = (1.0, 1.0, 1.0, 1.0),
                          p=None, threads: Optional[int] = None,
                          boundary: BoundaryMode = BoundaryMode.NONCLASSICAL,
                          **options) -> List[ConvergenceRow]:
        """Solve on n^4 grids for every n in `grids` and report errors and observed orders"""
        if len(grids) < 2:
            raise ValueError(f"A convergence study needs at least two grids, got {list(grids)}")

        def one(n: int) -> ConvergenceRow:
            grid = make_grid(lengths, (n,) * 4)
            solution, report = ManufacturedCaseService.solve_case(case, grid, boundary, **options)
            if not report.converged:
                logger.warning("%s did not converge on %d^4", case.name, n)
            metrics = ManufacturedCaseService.error_metrics(solution, case, p)
            return ConvergenceRow(counts=n, spacing=grid.step(1), error=metrics.u_error)

        with ThreadPoolExecutor(max_workers=settings.worker_count(threads)) as pool:
            rows = list(pool.map(one, grids))
        for coarse, fine in zip(rows, rows[1:]):
            fine.order = ManufacturedCaseService.observed_order(coarse, fine)
        logger.info("Convergence study %s: %s", case.name,
                    ", ".join(f"{r.counts}^4 -> {r.error:.3e}" for r in rows))
        return rows
