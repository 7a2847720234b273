"""Uniform 4D tensor grids, sampled fields and the cumulative quadrature primitive.

Every integral operator in the package (the representation Q, the boundary
function g0, the Volterra operator N) is a product of one-axis sweeps

    F(x) = int_0^{x_k} (x_k - tau)^p / p! f(..., tau, ...) dtau,   p in {0, 1}

evaluated by prefix accumulation, so each sweep costs O(nodes).
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from goursat4d.schemas.common import QuadratureRule

AXES: Tuple[int, ...] = (1, 2, 3, 4)
MIN_NODES = 3
MIN_NODES_SECOND_DERIVATIVE = 4
BOUNDARY_WIDTH = 6
BOUNDARY_EXACT_DEGREE = 3


@dataclass(frozen=True)
class Grid4:
    """Uniform node set over (0,h1) x (0,h2) x (0,h3) x (0,h4), endpoints included"""
    lengths: Tuple[float, float, float, float]
    counts: Tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.lengths) != 4 or len(self.counts) != 4:
            raise ValueError("Grid4 needs exactly four lengths and four counts")
        for axis, (h, n) in enumerate(zip(self.lengths, self.counts), start=1):
            if not np.isfinite(h) or h <= 0:
                raise ValueError(f"Length of axis {axis} must be positive, got {h}")
            if int(n) != n or n < MIN_NODES:
                raise ValueError(f"Node count of axis {axis} must be an integer >= {MIN_NODES}, got {n}")

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(h / (n - 1) for h, n in zip(self.lengths, self.counts))

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def length(self, axis: int) -> float:
        return self.lengths[check_axis(axis) - 1]

    def count(self, axis: int) -> int:
        return self.counts[check_axis(axis) - 1]

    def step(self, axis: int) -> float:
        return self.spacing[check_axis(axis) - 1]

    def nodes(self, axis: int) -> np.ndarray:
        # linspace places the last node exactly on h
        return np.linspace(0.0, self.length(axis), self.count(axis))

    def shape(self, axes: Sequence[int] = AXES) -> Tuple[int, ...]:
        return tuple(self.count(k) for k in axes)

    def coordinates(self, axes: Sequence[int] = AXES) -> Tuple[np.ndarray, ...]:
        """Sparse open-mesh coordinate arrays over `axes`, broadcastable to shape(axes)"""
        return tuple(np.meshgrid(*(self.nodes(k) for k in axes), indexing="ij", sparse=True))

    def coordinate(self, axis: int, axes: Sequence[int] = AXES) -> np.ndarray:
        """Nodes of `axis` reshaped to broadcast against an array over `axes`"""
        shape = [1] * len(axes)
        shape[list(axes).index(axis)] = self.count(axis)
        return self.nodes(axis).reshape(shape)

    def weights(self, axis: int) -> np.ndarray:
        """Composite trapezoid weights along one axis"""
        w = np.full(self.count(axis), self.step(axis))
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


def make_grid(lengths: Iterable[float], counts: Iterable[int]) -> Grid4:
    """Build a Grid4, validating lengths > 0 and counts >= 3"""
    return Grid4(tuple(float(h) for h in lengths), tuple(int(n) for n in counts))


def unit_grid(n: int) -> Grid4:
    return make_grid((1.0, 1.0, 1.0, 1.0), (n, n, n, n))


def check_axis(axis: int) -> int:
    if axis not in AXES:
        raise ValueError(f"Invalid axis {axis}; axes are numbered 1..4")
    return axis


def _index(ndim: int, pos: int, item) -> tuple:
    index = [slice(None)] * ndim
    index[pos] = item
    return tuple(index)


@dataclass(frozen=True, eq=False)
class Field:
    """Real samples over the sub-grid spanned by `axes` (row-major, last axis fastest)"""
    axes: Tuple[int, ...]
    values: np.ndarray
    grid: Grid4

    def __post_init__(self):
        axes = tuple(int(k) for k in self.axes)
        if any(k not in AXES for k in axes) or list(axes) != sorted(set(axes)):
            raise ValueError(f"Field axes must be a strictly increasing subset of 1..4, got {self.axes}")
        values = np.array(self.values, dtype=np.float64)
        expected = self.grid.shape(axes)
        if values.shape != expected:
            if values.size != int(np.prod(expected, dtype=int)):
                raise ValueError(f"Field over axes {axes} needs {expected} values, got shape {values.shape}")
            values = values.reshape(expected)
        if not np.all(np.isfinite(values)):
            raise ValueError("Field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid4, axes: Sequence[int] = AXES) -> "Field":
        return cls(tuple(axes), np.zeros(grid.shape(axes)), grid)

    @classmethod
    def constant(cls, grid: Grid4, axes: Sequence[int], value: float) -> "Field":
        return cls(tuple(axes), np.full(grid.shape(axes), float(value)), grid)

    @classmethod
    def from_function(cls, grid: Grid4, axes: Sequence[int], fn: Callable[..., np.ndarray]) -> "Field":
        """Sample fn(*coords) where coords are the open-mesh arrays of `axes`"""
        axes = tuple(axes)
        values = np.broadcast_to(fn(*grid.coordinates(axes)), grid.shape(axes))
        return cls(axes, values, grid)

    @property
    def dim(self) -> int:
        return len(self.axes)

    def expand(self) -> np.ndarray:
        """Read-only view broadcast over the full 4D grid"""
        shape = [self.grid.count(k) if k in self.axes else 1 for k in AXES]
        return np.broadcast_to(self.values.reshape(shape), self.grid.shape())

    def restrict(self, fixed: Mapping[int, float]) -> "Field":
        return face_restrict(self, fixed)

    def derivative(self, axis: int, order: int = 1) -> "Field":
        if axis not in self.axes:
            raise ValueError(f"Field over axes {self.axes} does not vary along axis {axis}")
        pos = self.axes.index(axis)
        return Field(self.axes, derivative_array(self.values, pos, self.grid.step(axis), order), self.grid)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def _check_compatible(self, other: "Field"):
        if self.grid != other.grid:
            raise ValueError("Fields live on different grids")
        if self.axes != other.axes:
            raise ValueError(f"Fields vary over different axes: {self.axes} vs {other.axes}")

    def __add__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return Field(self.axes, self.values + other.values, self.grid)

    def __sub__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return Field(self.axes, self.values - other.values, self.grid)

    def __mul__(self, scale: float) -> "Field":
        return Field(self.axes, self.values * float(scale), self.grid)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return self * -1.0


def face_restrict(f: Field, fixed: Mapping[int, float]) -> Field:
    """Copy the hyperplane x_k = 0 (or x_k = h_k) for every fixed axis k"""
    values = f.values
    kept = list(f.axes)
    for axis in sorted(fixed, reverse=True):
        check_axis(axis)
        if axis not in kept:
            raise ValueError(f"Cannot fix axis {axis}: field varies over {tuple(kept)}")
        where = float(fixed[axis])
        if where == 0.0:
            node = 0
        elif np.isclose(where, f.grid.length(axis)):
            node = f.grid.count(axis) - 1
        else:
            raise ValueError(f"Axis {axis} can only be fixed at 0 or h={f.grid.length(axis)}, got {where}")
        pos = kept.index(axis)
        values = values[_index(values.ndim, pos, node)]
        kept.pop(pos)
    return Field(tuple(kept), values, f.grid)


def cumulate(values: np.ndarray, pos: int, nodes: np.ndarray,
             kernel_power: int = 0, rule: QuadratureRule = QuadratureRule.TRAP) -> np.ndarray:
    """Prefix quadrature of `values` along array axis `pos` with kernel (x - tau)^p / p!

    Each output node j only reads input nodes m <= j. A single node integrates to 0.
    """
    if kernel_power not in (0, 1):
        raise ValueError(f"kernel_power must be 0 or 1, got {kernel_power}")
    if nodes.size < 2:
        return np.zeros(values.shape, dtype=np.float64)
    h = float(nodes[1] - nodes[0])
    shape = [1] * values.ndim
    shape[pos] = nodes.size
    x = nodes.reshape(shape)

    def prefix(g: np.ndarray) -> np.ndarray:
        if QuadratureRule(rule) is QuadratureRule.TRAP:
            return cumulative_trapezoid(g, dx=h, axis=pos, initial=0)
        out = np.zeros_like(g, dtype=np.float64)
        out[_index(g.ndim, pos, slice(1, None))] = h * np.cumsum(g[_index(g.ndim, pos, slice(None, -1))], axis=pos)
        return out

    if kernel_power == 0:
        return prefix(values)
    # sum_m w_m (x_j - tau_m) f_m = x_j * sum_m w_m f_m - sum_m w_m tau_m f_m
    return x * prefix(values) - prefix(x * values)


def cumulative_integral(f: Field, axis: int, kernel_power: int = 0,
                        rule: QuadratureRule = QuadratureRule.TRAP) -> Field:
    """F(x) = int_0^{x_k} (x_k - tau)^p / p! f dtau at every node; gains `axis` if absent"""
    check_axis(axis)
    if axis in f.axes:
        axes, values = f.axes, f.values
    else:
        axes = tuple(sorted(f.axes + (axis,)))
        pos = axes.index(axis)
        values = np.broadcast_to(np.expand_dims(f.values, pos), f.grid.shape(axes))
    pos = axes.index(axis)
    return Field(axes, cumulate(values, pos, f.grid.nodes(axis), kernel_power, rule), f.grid)


@lru_cache(maxsize=None)
def boundary_stencil(order: int, width: int) -> np.ndarray:
    """One-sided weights at node 0 of a unit-spaced row of `width` nodes

    Exact on cubics (on degree width-1 for shorter rows). Rows longer than
    the exactness needs get the minimum-norm weights, which amplify
    round-off in the samples far less than the compact stencil.
    """
    degree = min(BOUNDARY_EXACT_DEGREE, width - 1)
    if degree < order:
        raise ValueError(f"A {width}-node row cannot carry a derivative of order {order}")
    offsets = np.arange(width, dtype=np.float64)
    moments = offsets[np.newaxis, :] ** np.arange(degree + 1)[:, np.newaxis]
    target = np.zeros(degree + 1)
    target[order] = math.factorial(order)
    weights, *_ = np.linalg.lstsq(moments, target, rcond=None)
    weights.setflags(write=False)
    return weights


def _one_sided(values: np.ndarray, pos: int, order: int, last: bool) -> np.ndarray:
    rows = np.moveaxis(values, pos, 0)
    if last:
        rows = rows[::-1]
    weights = boundary_stencil(order, min(rows.shape[0], BOUNDARY_WIDTH))
    # Mirrored rows run backwards, so odd orders flip sign
    sign = -1.0 if last and order % 2 else 1.0
    return sign * np.tensordot(weights, rows[:weights.size], axes=1)


def derivative_array(values: np.ndarray, pos: int, h: float, order: int) -> np.ndarray:
    """Second-order finite differences along array axis `pos`

    Central differences inside; the two end nodes use `boundary_stencil`, so
    first derivatives are exact on quadratics and second derivatives on cubics.
    Computes in the dtype of `values` (float64 or wider).
    """
    n = values.shape[pos]
    if order == 0:
        return values
    if order not in (1, 2):
        raise ValueError(f"Derivative order must be 0, 1 or 2, got {order}")
    needed = MIN_NODES if order == 1 else MIN_NODES_SECOND_DERIVATIVE
    if n < needed:
        raise ValueError(f"Derivative of order {order} needs >= {needed} nodes, got {n}")
    at = lambda item: values[_index(values.ndim, pos, item)]
    out = np.empty(values.shape, dtype=np.result_type(values, np.float64))
    if order == 1:
        out[_index(values.ndim, pos, slice(1, -1))] = (at(slice(2, None)) - at(slice(None, -2))) / 2.0
    else:
        out[_index(values.ndim, pos, slice(1, -1))] = at(slice(2, None)) - 2.0 * at(slice(1, -1)) + at(slice(None, -2))
    out[_index(values.ndim, pos, 0)] = _one_sided(values, pos, order, last=False)
    out[_index(values.ndim, pos, -1)] = _one_sided(values, pos, order, last=True)
    return out / h ** order


def mixed_derivative(values: np.ndarray, grid: Grid4, orders: Sequence[int],
                     axes: Sequence[int] = AXES) -> np.ndarray:
    """Apply D_k^{orders[k]} along every axis of an array over `axes`

    The stages run in extended precision so only the rounding already in
    `values` is amplified by the h^-|orders| factor.
    """
    out = np.asarray(values, dtype=np.longdouble)
    for pos, (axis, order) in enumerate(zip(axes, orders)):
        if order:
            out = derivative_array(out, pos, np.longdouble(grid.step(axis)), order)
    return out.astype(np.float64)
