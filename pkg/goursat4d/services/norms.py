"""L_p, W_p^(1,1,2,2) and E_p^(1,1,2,2) norms and the empirical homeomorphism scan"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from goursat4d.core.config import settings
from goursat4d.core.grid import Field, Grid4
from goursat4d.models import ALL_INDICES, DerivativeBundle, EVector
from goursat4d.schemas.common import HomeoScanResult, NormConfig, SamplerKind

logger = logging.getLogger(__name__)


class NormService:
    """Discrete norms with trapezoid weights; p = inf is the grid maximum"""

    @staticmethod
    def lp_norm(f: Field, p=2.0, grid: Optional[Grid4] = None) -> float:
        config = NormConfig.of(p)
        if grid is not None and grid != f.grid:
            raise ValueError("Field does not live on the requested grid")
        magnitude = np.abs(f.values)
        if f.dim == 0:
            return float(magnitude)
        if config.is_max:
            return float(magnitude.max())
        total = magnitude ** config.p
        for axis in reversed(f.axes):
            total = total @ f.grid.weights(axis)
        return float(total) ** (1.0 / config.p)

    @staticmethod
    def mixed_norm(f: Field, exponents: Sequence[float]) -> float:
        """Iterated norm L^{x1..x4}_{q1..q4}: innermost (last) axis first"""
        values = np.abs(f.values)
        for axis in reversed(f.axes):
            q = NormConfig.of(exponents[axis - 1]).p
            if math.isinf(q):
                values = values.max(axis=-1)
            else:
                values = ((values ** q) @ f.grid.weights(axis)) ** (1.0 / q)
        return float(values)

    @staticmethod
    def wp_norm(bundle: DerivativeBundle, p=2.0, grid: Optional[Grid4] = None) -> float:
        """Sum over the 36 indices of ||D^i u||_{L_p(G)}"""
        if grid is not None and grid != bundle.grid:
            raise ValueError("Bundle does not live on the requested grid")
        return sum(NormService.lp_norm(field, p) for _, field in bundle.items())

    @staticmethod
    def ep_norm(v: EVector, p=2.0, grid: Optional[Grid4] = None) -> float:
        """Sum of the 36 component norms, each over its own face measure"""
        if grid is not None and grid != v.grid:
            raise ValueError("EVector does not live on the requested grid")
        return sum(NormService.lp_norm(field, p) for _, field in v.items())

    @staticmethod
    def random_evector(grid: Grid4, rng: np.random.Generator,
                       sampler: SamplerKind = SamplerKind.UNIFORM) -> EVector:
        components = {}
        for index in ALL_INDICES:
            axes = index.free_axes
            if SamplerKind(sampler) is SamplerKind.UNIFORM:
                components[index] = rng.uniform(-1.0, 1.0, grid.shape(axes))
                continue
            # Sum over subsets S of the free axes of c_S * prod_{k in S} x_k / h_k.
            values = np.zeros(grid.shape(axes))
            coords = [c / grid.length(k) for c, k in zip(grid.coordinates(axes), axes)]
            for mask in range(2 ** len(axes)):
                term = rng.uniform(-1.0, 1.0)
                for bit, coord in enumerate(coords):
                    if mask >> bit & 1:
                        term = term * coord
                values = values + term
            components[index] = values
        return EVector(grid, components)

    @staticmethod
    def homeo_ratio(b: EVector, p=2.0) -> float:
        """||Qb||_W / ||b||_E with the W-norm taken from finite differences of Qb"""
        # Imported here: the PDE operator module depends on this one.
        from goursat4d.services.pde_operator import PDEOperatorService
        from goursat4d.services.representation import RepresentationService

        u = RepresentationService.apply_Q(b)
        denominator = NormService.ep_norm(b, p)
        if denominator == 0.0:
            raise ValueError("The ratio is undefined for the zero EVector")
        return NormService.wp_norm(PDEOperatorService.finite_diff_bundle(u), p) / denominator

    @staticmethod
    def homeo_ratio_scan(grid: Grid4, p=2.0, samples: int = 100, seed: int = 1,
                         sampler: SamplerKind = SamplerKind.UNIFORM,
                         threads: Optional[int] = None) -> HomeoScanResult:
        """Empirical bounds of M1 ||b|| <= ||Qb|| <= M2 ||b|| over random EVectors"""
        if samples < 1:
            raise ValueError(f"samples must be >= 1, got {samples}")
        config = NormConfig.of(p)
        sub_seeds = np.random.SeedSequence(seed).spawn(samples)

        def one(sub_seed: np.random.SeedSequence) -> float:
            b = NormService.random_evector(grid, np.random.default_rng(sub_seed), sampler)
            return NormService.homeo_ratio(b, config)

        with ThreadPoolExecutor(max_workers=settings.worker_count(threads)) as pool:
            ratios = list(pool.map(one, sub_seeds))
        logger.info("Scanned %d samples on %s: ratio in [%.6g, %.6g]",
                    samples, grid.counts, min(ratios), max(ratios))
        return HomeoScanResult(
            min_ratio=min(ratios),
            max_ratio=max(ratios),
            ratios=ratios,
            p=config.p,
            seed=seed,
            sampler=SamplerKind(sampler),
        )
