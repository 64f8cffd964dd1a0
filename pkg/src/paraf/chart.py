"""Coordinate charts, tensor-field handles and their first derivatives.

All geometry lives on one global chart.  A field is a pure function from
coordinates to a component array of shape ``(dim,) * (r + s)`` (contravariant
slots first).  Partials are returned with the derivative index as the
trailing axis: ``d[..., c] = ∂_c T[...]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from paraf import dual
from paraf.errors import ContractError, DerivativeDomainError, DomainError

H_MIN = 1e-10
TOL_SYM = 1e-10
TOL_DET = 1e-10


class Strategy(str, enum.Enum):
    EXACT = "exact"
    DUAL = "dual"
    FD = "fd"


@dataclass(frozen=True)
class Chart:
    dim: int
    coordinate_names: tuple[str, ...]
    sample_box: tuple[tuple[float, float], ...]
    sample_count: int = 200
    seed: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise ContractError("chart dimension must be positive")
        object.__setattr__(self, "coordinate_names", tuple(self.coordinate_names))
        object.__setattr__(self, "sample_box", tuple((float(a), float(b)) for a, b in self.sample_box))
        if len(self.coordinate_names) != self.dim or len(set(self.coordinate_names)) != self.dim:
            raise ContractError("need one distinct coordinate name per dimension")
        if len(self.sample_box) != self.dim:
            raise ContractError("need one sample interval per dimension")
        for lo, hi in self.sample_box:
            if not hi > lo:
                raise ContractError(f"sample interval [{lo}, {hi}] has no interior")
        if self.sample_count < 1:
            raise ContractError("sample_count must be positive")
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be an unsigned 64-bit integer")

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.sample_box])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.sample_box])

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x) -> bool:
        v = np.array([float(dual.primal(c)) for c in x])
        return bool(np.all(v >= self.lower) and np.all(v <= self.upper))

    def with_sampling(self, sample_count: int | None = None, seed: int | None = None) -> "Chart":
        return replace(
            self,
            sample_count=self.sample_count if sample_count is None else sample_count,
            seed=self.seed if seed is None else seed,
        )


@dataclass(frozen=True, eq=False)
class Point:
    coords: np.ndarray
    index: int = 0


def sample_points(chart: Chart) -> list[Point]:
    """Box center first, then uniform PCG64 draws seeded by ``chart.seed``."""
    rng = np.random.Generator(np.random.PCG64(chart.seed))
    pts = [Point(chart.center, 0)]
    if chart.sample_count > 1:
        u = rng.random((chart.sample_count - 1, chart.dim))
        draws = chart.lower + u * (chart.upper - chart.lower)
        pts.extend(Point(row, k + 1) for k, row in enumerate(draws))
    return pts


def _coords(pt) -> np.ndarray:
    if isinstance(pt, Point):
        return pt.coords
    arr = np.asarray(pt)
    if arr.dtype == object:
        return arr
    return arr.astype(float)


@dataclass(frozen=True, eq=False)
class TensorFieldHandle:
    """A tensor field on ``chart`` given by a component evaluator.

    ``jacobian`` optionally supplies closed-form partials (same trailing-axis
    layout as :func:`partial_derivatives`); it backs the ``exact`` strategy.
    Evaluators must only use arithmetic and :mod:`paraf.dual` functions so
    they also accept dual-number coordinates.
    """

    chart: Chart
    valence: tuple[int, int]
    evaluator: Callable[[np.ndarray], np.ndarray]
    derivative_strategy: Strategy = Strategy.DUAL
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    fd_step: Optional[float] = None
    name: str = ""
    nodes: Optional[np.ndarray] = field(default=None, repr=False)  # expression trees, if any

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.chart.dim,) * sum(self.valence)

    def with_strategy(self, strategy: Strategy | str, fd_step: float | None = None):
        return replace(self, derivative_strategy=Strategy(strategy), fd_step=fd_step)


@dataclass(frozen=True, eq=False)
class MetricField(TensorFieldHandle):
    signature: Optional[tuple[int, int]] = None


def eval_field(fld: TensorFieldHandle, pt) -> np.ndarray:
    x = _coords(pt)
    if len(x) != fld.chart.dim:
        raise ContractError(f"point has {len(x)} coordinates, chart has {fld.chart.dim}")
    if not fld.chart.contains(x):
        raise DomainError(f"point {np.asarray([dual.primal(c) for c in x])} lies outside the sample box")
    val = fld.evaluator(x)
    if not isinstance(val, np.ndarray):
        val = dual.as_array(val)
    if val.shape != fld.shape:
        raise ContractError(f"field {fld.name or '?'} returned shape {val.shape}, expected {fld.shape}")
    return val


def fd_steps(chart: Chart, x: np.ndarray, base: float | None = None) -> np.ndarray:
    """Central-difference steps, shrunk so every stencil stays inside the box."""
    xv = np.array([float(dual.primal(c)) for c in x])
    if base is None:
        h = np.cbrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(xv))
    else:
        h = np.full(chart.dim, float(base))
    room = np.minimum(xv - chart.lower, chart.upper - xv)
    h = np.minimum(h, room)
    if np.any(h < H_MIN):
        c = int(np.argmin(h))
        raise DerivativeDomainError(
            f"stencil for {chart.coordinate_names[c]} at {xv[c]:.6g} would leave the box"
        )
    return h


def jet(fld: TensorFieldHandle, pt) -> tuple[np.ndarray, np.ndarray]:
    """Components and first partials of ``fld`` at ``pt`` per its strategy.

    A handle without a closed-form jacobian falls back to dual numbers under
    the exact strategy.
    """
    x = _coords(pt)
    value = eval_field(fld, x)
    n = fld.chart.dim
    strategy = fld.derivative_strategy
    if strategy is Strategy.EXACT and fld.jacobian is not None:
        d = fld.jacobian(x)
        if not isinstance(d, np.ndarray):
            d = dual.as_array(d)
        if d.shape != fld.shape + (n,):
            raise ContractError(f"jacobian of {fld.name or '?'} has shape {d.shape}")
        return value, d
    if strategy in (Strategy.EXACT, Strategy.DUAL):
        _, d = dual.jacobian(fld.evaluator, x)
        return value, d
    h = fd_steps(fld.chart, x, fld.fd_step)
    cols = []
    for c in range(n):
        xp = x.copy()
        xm = x.copy()
        xp[c] = xp[c] + h[c]
        xm[c] = xm[c] - h[c]
        cols.append((eval_field(fld, xp) - eval_field(fld, xm)) / (2.0 * h[c]))
    return value, np.stack(cols, axis=-1)


def partial_derivatives(fld: TensorFieldHandle, pt) -> np.ndarray:
    return jet(fld, pt)[1]


# -- small constructors --------------------------------------------------------


def constant_field(chart: Chart, value, valence: tuple[int, int], name: str = "", **kw) -> TensorFieldHandle:
    arr = np.array(value, dtype=float)
    if arr.shape != (chart.dim,) * sum(valence):
        raise ContractError(f"constant components have shape {arr.shape}")
    zeros = np.zeros(arr.shape + (chart.dim,))
    return TensorFieldHandle(
        chart,
        valence,
        lambda x: arr.copy(),
        jacobian=lambda x: zeros.copy(),
        name=name,
        **kw,
    )


def identity_field(chart: Chart, **kw) -> TensorFieldHandle:
    return constant_field(chart, np.eye(chart.dim), (1, 1), name="id", **kw)


def scalar_field(chart: Chart, fn: Callable, name: str = "", **kw) -> TensorFieldHandle:
    return TensorFieldHandle(chart, (0, 0), lambda x: dual.as_array(fn(x)), name=name, **kw)


def function_field(
    chart: Chart, fn: Callable, valence: tuple[int, int], name: str = "", **kw
) -> TensorFieldHandle:
    """Field from ``fn(x) -> nested list`` of components."""
    return TensorFieldHandle(chart, valence, lambda x: dual.as_array(fn(x)), name=name, **kw)


def coordinate_basis(dim: int) -> np.ndarray:
    return np.eye(dim)


__all__ = [
    "Chart",
    "MetricField",
    "Point",
    "Strategy",
    "TensorFieldHandle",
    "constant_field",
    "coordinate_basis",
    "eval_field",
    "fd_steps",
    "function_field",
    "identity_field",
    "jet",
    "partial_derivatives",
    "sample_points",
    "scalar_field",
]
