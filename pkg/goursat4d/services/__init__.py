"""Service layer: one class per part of the solver"""
from goursat4d.services.boundary_data import BoundaryDataService
from goursat4d.services.mms import ManufacturedCaseService
from goursat4d.services.norms import NormService
from goursat4d.services.pde_operator import PDEOperatorService
from goursat4d.services.representation import RepresentationService
from goursat4d.services.volterra import VolterraService

__all__ = [
    "BoundaryDataService",
    "ManufacturedCaseService",
    "NormService",
    "PDEOperatorService",
    "RepresentationService",
    "VolterraService",
]
