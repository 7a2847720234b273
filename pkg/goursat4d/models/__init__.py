"""Domain data containers: multi-indices, trace vectors, classical data, coefficients"""
from goursat4d.models.multi_index import (
    ALL_INDICES,
    BOUNDARY_INDICES,
    DOMINANT,
    ORDER_PROFILE,
    MultiIndex,
)
from goursat4d.models.evector import EVector
from goursat4d.models.classical import CLASSICAL_SLOTS, ClassicalData
from goursat4d.models.coefficients import CoefficientSet, DerivativeBundle
from goursat4d.models.solution import Solution

__all__ = [
    "ALL_INDICES",
    "BOUNDARY_INDICES",
    "DOMINANT",
    "ORDER_PROFILE",
    "MultiIndex",
    "EVector",
    "CLASSICAL_SLOTS",
    "ClassicalData",
    "CoefficientSet",
    "DerivativeBundle",
    "Solution",
]
