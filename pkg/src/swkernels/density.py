"""Discrete probability densities on regular 1D and 2D grids.

A density is stored as per-cell density values (not cell masses): the total
mass is ``values.sum() * spacing`` in 1D and ``values.sum() * pixel_size**2``
in 2D. Each sample position is the centre of a cell of width ``spacing``, and
the density is treated as constant inside that cell. Under this histogram
model the CDF is piecewise linear with knots on the cell edges, which makes
quantiles, transport maps and Wasserstein distances exact for the discrete
object.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DEFAULT_EPSILON",
    "Grid1D",
    "DiscreteDensity1D",
    "DiscreteDensity2D",
    "Cdf1D",
    "normalize",
    "normalize_1d",
    "normalize_2d",
    "cdf",
    "quantile",
]

#: Relative positivity floor: fraction of the total mass spread uniformly.
DEFAULT_EPSILON = 1e-8

_MASS_TOL = 1e-12


class DensityError(ValueError):
    """Raised for invalid density input (negative or zero mass, bad grids)."""


@dataclass(frozen=True)
class Grid1D:
    """Regular grid ``origin + k * spacing`` for ``k = 0 .. count - 1``."""

    origin: float
    spacing: float
    count: int

    def __post_init__(self):
        if not self.spacing > 0:
            raise DensityError(f"grid spacing must be positive, got {self.spacing}")
        if self.count < 2:
            raise DensityError(f"grid needs at least 2 samples, got {self.count}")

    @classmethod
    def centered(cls, half_width: float, count: int) -> "Grid1D":
        """Grid of ``count`` cells tiling ``[-half_width, half_width]``."""
        spacing = 2.0 * half_width / count
        return cls(-half_width + 0.5 * spacing, spacing, count)

    @classmethod
    def cells(cls, lo: float, hi: float, count: int) -> "Grid1D":
        """Grid of ``count`` equal cells tiling ``[lo, hi]``, sampled at centres."""
        spacing = (hi - lo) / count
        return cls(lo + 0.5 * spacing, spacing, count)

    @property
    def positions(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.count)

    @property
    def edges(self) -> np.ndarray:
        """The ``count + 1`` cell boundaries."""
        return self.origin + self.spacing * (np.arange(self.count + 1) - 0.5)

    def same_as(self, other: "Grid1D") -> bool:
        return (
            self.count == other.count
            and np.isclose(self.origin, other.origin, rtol=0, atol=1e-12 * self.spacing)
            and np.isclose(self.spacing, other.spacing, rtol=1e-12, atol=0)
        )


@dataclass(frozen=True, eq=False)
class DiscreteDensity1D:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.count,):
            raise DensityError(
                f"expected {self.grid.count} values, got shape {values.shape}"
            )
        if np.any(values < 0):
            raise DensityError("negative mass")
        total = values.sum() * self.grid.spacing
        if abs(total - 1.0) > _MASS_TOL * max(1, values.size):
            raise DensityError(f"density integrates to {total!r}, not 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def positions(self) -> np.ndarray:
        return self.grid.positions

    @property
    def masses(self) -> np.ndarray:
        """Probability mass carried by each cell."""
        return self.values * self.grid.spacing

    def mean(self) -> float:
        return float(np.dot(self.masses, self.positions))

    def is_positive(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True, eq=False)
class DiscreteDensity2D:
    """Row-major density; pixel centres are symmetric about the origin.

    Column ``j`` sits at ``x = (j - (cols - 1) / 2) * pixel_size`` and row ``i``
    at ``y = (i - (rows - 1) / 2) * pixel_size``.
    """

    values: np.ndarray
    pixel_size: float = 1.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or min(values.shape) < 2:
            raise DensityError(f"expected a 2D grid of at least 2x2, got {values.shape}")
        if not self.pixel_size > 0:
            raise DensityError("pixel size must be positive")
        if np.any(values < 0):
            raise DensityError("negative mass")
        total = values.sum() * self.pixel_size**2
        if abs(total - 1.0) > _MASS_TOL * max(1, values.size):
            raise DensityError(f"density integrates to {total!r}, not 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def masses(self) -> np.ndarray:
        return self.values * self.pixel_size**2

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-centre ``(x, y)`` coordinate vectors for columns and rows."""
        x = (np.arange(self.cols) - (self.cols - 1) / 2) * self.pixel_size
        y = (np.arange(self.rows) - (self.rows - 1) / 2) * self.pixel_size
        return x, y

    def same_grid(self, other: "DiscreteDensity2D") -> bool:
        return self.shape == other.shape and np.isclose(
            self.pixel_size, other.pixel_size, rtol=1e-12, atol=0
        )

    def is_positive(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True, eq=False)
class Cdf1D:
    """Cumulative distribution sampled at the upper edge of every cell.

    ``values[k]`` is the mass of cells ``0 .. k`` inclusive, i.e. the CDF at
    ``positions[k] + spacing / 2``. Between cell edges the CDF is linear.
    """

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    @property
    def knots(self) -> np.ndarray:
        """CDF values at all ``count + 1`` cell edges, starting with 0."""
        return np.concatenate(([0.0], self.values))

    def evaluate(self, t) -> np.ndarray:
        """CDF at arbitrary positions (linear between cell edges)."""
        return np.interp(t, self.grid.edges, self.knots, left=0.0, right=1.0)


def _regularize(raw: np.ndarray, epsilon: float) -> np.ndarray:
    raw = np.asarray(raw, dtype=float)
    if not np.all(np.isfinite(raw)):
        raise DensityError("non-finite mass")
    if epsilon < 0:
        raise DensityError("epsilon must be nonnegative")
    if np.any(raw < 0):
        raise DensityError("negative mass")
    total = raw.sum()
    if not total > 0:
        raise DensityError("degenerate density")
    # Rescale first so the floor cannot underflow for tiny (subnormal) totals.
    p = raw / raw.max()
    p /= p.sum()
    out = p + epsilon / raw.size
    return out / out.sum()


def normalize_1d(raw, grid: Grid1D, epsilon: float = DEFAULT_EPSILON) -> DiscreteDensity1D:
    """Regularize raw nonnegative cell weights into a 1D density on ``grid``.

    ``epsilon`` is a fraction of the total mass added uniformly before
    rescaling, so that the result is strictly positive.
    """
    p = _regularize(raw, epsilon)
    return DiscreteDensity1D(grid, p / grid.spacing)


def normalize_2d(raw, pixel_size: float = 1.0, epsilon: float = DEFAULT_EPSILON) -> DiscreteDensity2D:
    p = _regularize(raw, epsilon)
    return DiscreteDensity2D(p / pixel_size**2, pixel_size)


def normalize(raw, grid: Grid1D | float | None = None, epsilon: float = DEFAULT_EPSILON):
    """Dispatch on dimensionality of ``raw``.

    For 1D input ``grid`` is a :class:`Grid1D` (default: unit spacing starting
    at 0); for 2D input it is the pixel size (default 1).
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim == 1:
        if grid is None:
            grid = Grid1D(0.0, 1.0, raw.size)
        return normalize_1d(raw, grid, epsilon)
    if raw.ndim == 2:
        return normalize_2d(raw, 1.0 if grid is None else float(grid), epsilon)
    raise DensityError(f"densities must be 1D or 2D, got {raw.ndim}D")


def cdf(d: DiscreteDensity1D) -> Cdf1D:
    values = np.cumsum(d.masses)
    # Pin the last knot to 1 so the quantile of p = 1 is well defined.
    values = values / values[-1]
    values.setflags(write=False)
    return Cdf1D(d.grid, values)


def quantile(c: Cdf1D, p):
    """Smallest position ``t`` with ``CDF(t) >= p``.

    The CDF is linear between cell edges, so inside the bracketing cell the
    answer is found by linear interpolation. Accepts scalars or arrays.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0) | (p_arr > 1)) or np.any(np.isnan(p_arr)):
        raise DensityError("quantile level must lie in [0, 1]")
    out = _quantile_knots(c.grid.edges, c.knots, p_arr)
    return float(out) if out.ndim == 0 else out


def _quantile_knots(edges: np.ndarray, knots: np.ndarray, p: np.ndarray) -> np.ndarray:
    # First knot index with knots[k] >= p; cells with zero mass are skipped.
    k = np.searchsorted(knots, p, side="left")
    k = np.clip(k, 1, knots.size - 1)
    lo, hi = knots[k - 1], knots[k]
    width = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(width > 0, (p - lo) / width, 1.0)
    frac = np.clip(frac, 0.0, 1.0)
    out = edges[k - 1] + frac * (edges[k] - edges[k - 1])
    return np.where(p <= 0, edges[0], out)
