"""Radon transform of 2D densities and filtered back-projection.

Slices are indexed by angle ``theta`` in ``[0, pi)``; the direction of
projection is ``(cos theta, sin theta)`` in the ``(x, y)`` = (column, row)
frame of :class:`~swkernels.density.DiscreteDensity2D`. The offset grid ``t``
is centred on the origin and spans the image diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .density import (
    DEFAULT_EPSILON,
    DensityError,
    DiscreteDensity2D,
    Grid1D,
    _regularize,
    normalize_2d,
)
from ._parallel import thread_map

__all__ = [
    "AngleSet",
    "SlicedRepresentation",
    "RadonError",
    "default_t_grid",
    "project",
    "radon_forward",
    "radon_inverse",
    "back_project",
    "ramp_filter",
]

DEFAULT_ANGLES = 180

# Angles per map_coordinates call; bounds peak memory for large images.
_ANGLE_CHUNK = 8


class RadonError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AngleSet:
    """``count`` equally spaced angles ``l * pi / count`` in ``[0, pi)``."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise RadonError("need at least one angle")

    @property
    def angles(self) -> np.ndarray:
        return np.arange(self.count) * (np.pi / self.count)

    def __eq__(self, other):
        return isinstance(other, AngleSet) and other.count == self.count

    def __hash__(self):
        return hash(self.count)


@dataclass(frozen=True, eq=False)
class SlicedRepresentation:
    """Sinogram: row ``l`` is the density of the projection at angle ``l``."""

    angle_set: AngleSet
    t_grid: Grid1D
    slices: np.ndarray = field(repr=False)

    def __post_init__(self):
        slices = np.array(self.slices, dtype=float)
        if slices.shape != (self.angle_set.count, self.t_grid.count):
            raise RadonError(
                f"sinogram shape {slices.shape} does not match "
                f"{self.angle_set.count} angles x {self.t_grid.count} offsets"
            )
        mass = slices.sum(axis=1) * self.t_grid.spacing
        if np.any(np.abs(mass - 1.0) > 1e-6) or np.any(slices < 0):
            raise RadonError("every slice must be a nonnegative unit-mass density")
        slices.setflags(write=False)
        object.__setattr__(self, "slices", slices)

    @property
    def knots(self) -> np.ndarray:
        """Per-angle CDF knots on the cell edges, shape (L, T + 1)."""
        c = np.cumsum(self.slices, axis=1) * self.t_grid.spacing
        c /= c[:, -1:]
        return np.concatenate([np.zeros((c.shape[0], 1)), c], axis=1)


def default_t_grid(rows: int, cols: int, pixel_size: float = 1.0, t_count: int | None = None) -> Grid1D:
    """Offset grid covering the image diagonal.

    ``t_count`` defaults to ``max(rows, cols)`` rounded up to an even number.
    """
    if t_count is None:
        t_count = max(rows, cols)
        t_count += t_count % 2
    if t_count < 2:
        raise RadonError("t_count must be at least 2")
    half = 0.5 * pixel_size * np.hypot(rows, cols)
    return Grid1D.centered(half, t_count)


def _check_coverage(shape, pixel_size, thetas, t_grid: Grid1D) -> None:
    rows, cols = shape
    reach = 0.5 * pixel_size * (cols * np.abs(np.cos(thetas)) + rows * np.abs(np.sin(thetas)))
    lo, hi = t_grid.edges[0], t_grid.edges[-1]
    slack = 1e-9 * t_grid.spacing
    if np.any(reach > -lo + slack) or np.any(reach > hi + slack):
        raise RadonError("truncated projection: t-grid does not cover the rotated support")


def project(values: np.ndarray, pixel_size: float, thetas, t_grid: Grid1D) -> np.ndarray:
    """Line integrals of a 2D array along rays, one row per angle.

    Rays are sampled every half pixel and the image is read with bilinear
    interpolation (zero outside). Linear in ``values``; no normalization.
    Angles are not restricted to ``[0, pi)``.
    """
    values = np.asarray(values, dtype=float)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    rows, cols = values.shape
    _check_coverage(values.shape, pixel_size, thetas, t_grid)
    step = 0.5 * pixel_size
    half = 0.5 * pixel_size * np.hypot(rows, cols) + pixel_size
    n_gamma = int(np.ceil(half / step))
    gamma = step * np.arange(-n_gamma, n_gamma + 1)
    t = t_grid.positions
    out = np.empty((thetas.size, t.size))
    for start in range(0, thetas.size, _ANGLE_CHUNK):
        th = thetas[start:start + _ANGLE_CHUNK]
        c, s = np.cos(th)[:, None, None], np.sin(th)[:, None, None]
        x = t[None, :, None] * c - gamma[None, None, :] * s
        y = t[None, :, None] * s + gamma[None, None, :] * c
        col = x / pixel_size + (cols - 1) / 2
        row = y / pixel_size + (rows - 1) / 2
        samples = ndimage.map_coordinates(
            values, [row.ravel(), col.ravel()], order=1, mode="constant", cval=0.0
        ).reshape(x.shape)
        out[start:start + th.size] = samples.sum(axis=2) * step
    return out


def radon_forward(
    density: DiscreteDensity2D,
    angles: AngleSet | int = DEFAULT_ANGLES,
    t_count: int | None = None,
    epsilon: float = DEFAULT_EPSILON,
    t_grid: Grid1D | None = None,
) -> SlicedRepresentation:
    """Project ``density`` onto every angle and regularize each slice.

    Each slice is rescaled to unit mass and floored by ``epsilon`` (a
    fraction of its mass spread uniformly) so that 1D transport on it is
    well posed.
    """
    if isinstance(angles, (int, np.integer)):
        angles = AngleSet(int(angles))
    if t_grid is None:
        t_grid = default_t_grid(density.rows, density.cols, density.pixel_size, t_count)
    raw = project(density.values, density.pixel_size, angles.angles, t_grid)
    slices = np.empty_like(raw)
    for k, row in enumerate(raw):
        try:
            slices[k] = _regularize(np.maximum(row, 0.0), epsilon) / t_grid.spacing
        except DensityError as exc:
            raise RadonError(f"slice {k} at angle {angles.angles[k]:.6g}: {exc}") from None
    return SlicedRepresentation(angles, t_grid, slices)


def radon_forward_many(densities, angles: AngleSet | int = DEFAULT_ANGLES, t_count=None,
                       epsilon: float = DEFAULT_EPSILON, t_grid: Grid1D | None = None):
    """:func:`radon_forward` over a sequence, in input order."""
    return thread_map(
        lambda d: radon_forward(d, angles, t_count, epsilon, t_grid), list(densities)
    )


def ramp_filter(sinogram: np.ndarray, spacing: float) -> np.ndarray:
    """Ram-Lak filtering of each row, done in the frequency domain.

    The band-limited ramp is built from its spatial samples (``1/(4 dt^2)``
    at 0, ``-1/(pi k dt)^2`` at odd ``k``), which avoids the DC bias of a
    sampled ``|omega|``.
    """
    sinogram = np.atleast_2d(sinogram)
    n = sinogram.shape[1]
    size = max(64, int(2 ** np.ceil(np.log2(2 * n))))
    k = np.concatenate([np.arange(0, size // 2 + 1), np.arange(-size // 2 + 1, 0)])
    h = np.zeros(size)
    h[0] = 0.25 / spacing**2
    odd = k % 2 == 1
    h[odd] = -1.0 / (np.pi * k[odd] * spacing) ** 2
    H = np.real(np.fft.fft(h))
    padded = np.zeros((sinogram.shape[0], size))
    padded[:, :n] = sinogram
    filtered = np.real(np.fft.ifft(np.fft.fft(padded, axis=1) * H, axis=1))[:, :n]
    return filtered * spacing


def back_project(sinogram: np.ndarray, thetas, t_grid: Grid1D, rows: int, cols: int, pixel_size: float) -> np.ndarray:
    """Sum each row of ``sinogram`` back along its rays (linear in t)."""
    x = (np.arange(cols) - (cols - 1) / 2) * pixel_size
    y = (np.arange(rows) - (rows - 1) / 2) * pixel_size
    X, Y = np.meshgrid(x, y)
    t = t_grid.positions
    image = np.zeros((rows, cols))
    for theta, q in zip(np.atleast_1d(thetas), np.atleast_2d(sinogram)):
        image += np.interp(X * np.cos(theta) + Y * np.sin(theta), t, q, left=0.0, right=0.0)
    return image


def radon_inverse(
    sliced: SlicedRepresentation,
    rows: int,
    cols: int,
    pixel_size: float | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> DiscreteDensity2D:
    """Filtered back-projection, clamped to nonnegative and renormalized.

    ``pixel_size`` defaults to the value for which the t-grid exactly spans
    the image diagonal, i.e. the geometry used by :func:`radon_forward`.
    Use at least ``rows`` angles for a faithful reconstruction.
    """
    t_grid = sliced.t_grid
    if pixel_size is None:
        pixel_size = t_grid.count * t_grid.spacing / np.hypot(rows, cols)
    filtered = ramp_filter(sliced.slices, t_grid.spacing)
    image = back_project(filtered, sliced.angle_set.angles, t_grid, rows, cols, pixel_size)
    image *= np.pi / sliced.angle_set.count
    image = np.maximum(image, 0.0)
    if not image.sum() > 0:
        # Nothing survived the clamp; fall back to plain back-projection.
        image = back_project(sliced.slices, sliced.angle_set.angles, t_grid, rows, cols, pixel_size)
    return normalize_2d(image, pixel_size, epsilon)
