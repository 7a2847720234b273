"""Classical Goursat data, its compatibility conditions and the conversions to and from EVectors"""
import logging
from typing import Dict, NamedTuple, Optional, Tuple

from goursat4d.core.config import settings
from goursat4d.core.grid import AXES, Field
from goursat4d.models import BOUNDARY_INDICES, CLASSICAL_SLOTS, ClassicalData, EVector, MultiIndex
from goursat4d.schemas.common import CompatReport, QuadratureRule
from goursat4d.services.representation import RepresentationService

logger = logging.getLogger(__name__)


class FaceTerm(NamedTuple):
    """component, optionally differentiated along one axis, then restricted to x_axis = 0"""
    component: str
    derivative: Optional[int]
    restrict: int


# Both sides of every compatibility identity.
COMPATIBILITY_IDENTITIES: Dict[str, Tuple[FaceTerm, FaceTerm]] = {
    "F(0,x3,x4)=g(0,x3,x4)": (FaceTerm("F", None, 2), FaceTerm("g", None, 1)),
    "F(x2,0,x4)=psi(0,x2,x4)": (FaceTerm("F", None, 3), FaceTerm("psi", None, 1)),
    "g_x4(x1,x3,0)=S(x1,0,x3)": (FaceTerm("g", 4, 4), FaceTerm("S", None, 2)),
    "F(x2,x3,0)=T(0,x2,x3)": (FaceTerm("F", None, 4), FaceTerm("T", None, 1)),
    "F_x3(x2,0,x4)=Phi(0,x2,x4)": (FaceTerm("F", 3, 3), FaceTerm("Phi", None, 1)),
    "F_x4(x2,x3,0)=S(0,x2,x3)": (FaceTerm("F", 4, 4), FaceTerm("S", None, 1)),
    "g(x1,x3,0)=T(x1,0,x3)": (FaceTerm("g", None, 4), FaceTerm("T", None, 2)),
    "g(x1,0,x4)=psi(x1,0,x4)": (FaceTerm("g", None, 3), FaceTerm("psi", None, 2)),
    "g_x3(x1,0,x4)=Phi(x1,0,x4)": (FaceTerm("g", 3, 3), FaceTerm("Phi", None, 2)),
    "psi(x1,x2,0)=T(x1,x2,0)": (FaceTerm("psi", None, 4), FaceTerm("T", None, 3)),
    "psi_x4(x1,x2,0)=S(x1,x2,0)": (FaceTerm("psi", 4, 4), FaceTerm("S", None, 3)),
    "Phi_x4(x1,x2,0)=S_x3(x1,x2,0)": (FaceTerm("Phi", 4, 4), FaceTerm("S", 3, 3)),
}

# Expression used for the returned value of each phi_i; the other usable
# classical components only feed the spread diagnostic.
CANONICAL_SOURCE: Dict[str, str] = {
    "0,0,0,0": "F", "0,0,1,0": "Phi", "0,0,0,1": "S", "0,0,1,1": "S",
    "1,0,0,0": "g", "1,0,1,0": "g", "1,0,0,1": "g", "1,0,1,1": "g",
    "0,1,0,0": "F", "0,1,1,0": "F", "0,1,0,1": "F", "0,1,1,1": "F",
    "0,0,2,0": "F", "0,0,2,1": "F", "0,0,0,2": "F", "0,0,1,2": "F",
    "1,1,0,0": "psi", "1,1,1,0": "T", "1,1,0,1": "psi", "1,1,1,1": "Phi",
    "1,0,2,0": "g", "1,0,2,1": "g", "1,0,0,2": "g", "1,0,1,2": "g",
    "0,1,2,0": "F", "0,1,2,1": "F", "0,1,0,2": "F", "0,1,1,2": "F", "0,0,2,2": "F",
    "1,1,2,0": "T", "1,1,2,1": "S", "1,1,0,2": "psi", "1,1,1,2": "Phi",
    "0,1,2,2": "F", "1,0,2,2": "g",
}


class BoundaryDataService:
    """Conversions between the classical data (F, g, psi, Phi, T, S) and EVectors"""

    @staticmethod
    def _face_term(c: ClassicalData, term: FaceTerm) -> Field:
        field = getattr(c, term.component)
        if term.derivative is not None:
            field = field.derivative(term.derivative)
        return field.restrict({term.restrict: 0.0})

    @staticmethod
    def check_compatibility(c: ClassicalData, tol: Optional[float] = None) -> CompatReport:
        tol = settings.compat_tol if tol is None else tol
        if tol < 0:
            raise ValueError(f"tol must be non-negative, got {tol}")
        violations = {}
        for name, (left, right) in COMPATIBILITY_IDENTITIES.items():
            lhs = BoundaryDataService._face_term(c, left)
            rhs = BoundaryDataService._face_term(c, right)
            violations[name] = (lhs - rhs).max_abs()
        passed = all(value <= tol for value in violations.values())
        logger.debug("Compatibility check: max violation %.3e, passed=%s", max(violations.values()), passed)
        return CompatReport(violations=violations, tol=tol, passed=passed)

    @staticmethod
    def usable_components(index) -> Tuple[str, ...]:
        """Classical components from which phi_index can be read off

        A component on the face x_f = 0 carrying the normal derivative of order q
        gives phi_i exactly when i_f = q.
        """
        index = MultiIndex.of(index)
        return tuple(name for name, slot in CLASSICAL_SLOTS.items()
                     if index[slot.fixed_axis - 1] == slot.normal_order)

    @staticmethod
    def expression(c: ClassicalData, index, component: str) -> Field:
        """phi_index computed from one classical component"""
        index = MultiIndex.of(index)
        if component not in BoundaryDataService.usable_components(index):
            raise ValueError(f"Invalid source {component} for phi{index}")
        field = getattr(c, component)
        slot = CLASSICAL_SLOTS[component]
        for axis in field.axes:
            order = index[axis - 1]
            if order:
                field = field.derivative(axis, order)
        cut = {k: 0.0 for k in index.fixed_axes if k != slot.fixed_axis}
        return field.restrict(cut) if cut else field

    @staticmethod
    def alternatives(c: ClassicalData, index) -> Dict[str, Field]:
        return {name: BoundaryDataService.expression(c, index, name)
                for name in BoundaryDataService.usable_components(index)}

    @staticmethod
    def classical_to_nonclassical(c: ClassicalData) -> EVector:
        """Boundary part of the EVector; the dominant slot is left zero"""
        components = {
            index: BoundaryDataService.expression(c, index, CANONICAL_SOURCE[index.label()])
            for index in BOUNDARY_INDICES
        }
        return EVector(c.grid, components)

    @staticmethod
    def conversion_spread(c: ClassicalData) -> Dict[MultiIndex, float]:
        """Largest disagreement between the usable expressions of each phi_i"""
        spread = {}
        for index in BOUNDARY_INDICES:
            options = BoundaryDataService.alternatives(c, index)
            canonical = options[CANONICAL_SOURCE[index.label()]]
            spread[index] = max((other - canonical).max_abs() for other in options.values())
        return spread

    @staticmethod
    def nonclassical_to_classical(phi: EVector,
                                  rule: QuadratureRule = QuadratureRule.TRAP) -> ClassicalData:
        """Face restrictions of g0 = Q(boundary part of phi) and of its normal derivatives"""
        g0 = RepresentationService.build_g0(phi, rule=rule)
        d3 = RepresentationService.g0_derivative(phi, (0, 0, 1, 0), rule=rule)
        d4 = RepresentationService.g0_derivative(phi, (0, 0, 0, 1), rule=rule)
        return BoundaryDataService.classical_from_function(g0, d3, d4)

    @staticmethod
    def classical_from_function(u: Field, du3: Field, du4: Field) -> ClassicalData:
        """Sample classical data from u and its x3 and x4 derivatives on the full grid"""
        for field in (u, du3, du4):
            if field.axes != AXES or field.grid != u.grid:
                raise ValueError("Classical data is sampled from 4D fields on one grid")
        return ClassicalData(
            F=u.restrict({1: 0.0}),
            g=u.restrict({2: 0.0}),
            psi=u.restrict({3: 0.0}),
            Phi=du3.restrict({3: 0.0}),
            T=u.restrict({4: 0.0}),
            S=du4.restrict({4: 0.0}),
        )
