"""Sliced Wasserstein distance and the invertible embedding ``phi``.

The angle measure is the uniform probability measure on the angle grid, so

    SW(a, b)^2 = mean over angles of W2(R a(., theta), R b(., theta))^2

and the inner product on embeddings is the angle average of the per-slice
Riemann inner products.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .density import DEFAULT_EPSILON, DiscreteDensity2D, Grid1D, normalize_2d
from .radon import (
    DEFAULT_ANGLES,
    AngleSet,
    SlicedRepresentation,
    radon_forward,
    radon_forward_many,
    radon_inverse,
)
from .transport import _batched_quantile, w2_squared_knots, push_forward_knots, _MONOTONE_SLACK

__all__ = [
    "FeatureVector",
    "Template",
    "EmbeddingError",
    "make_template",
    "sw_distance",
    "sw_from_sliced",
    "pairwise_sw2",
    "phi_embed",
    "phi_embed_many",
    "phi_invert",
]


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Embedding of a density: an ``L x T`` array over (angle, offset)."""

    angle_set: AngleSet
    t_grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.angle_set.count, self.t_grid.count):
            raise EmbeddingError(f"feature shape {values.shape} does not match the angle/offset grid")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def weight(self) -> float:
        """Quadrature weight of one entry (offset spacing over angle count)."""
        return self.t_grid.spacing / self.angle_set.count

    def inner(self, other: "FeatureVector") -> float:
        self._check(other)
        return float(np.sum(self.values * other.values) * self.weight)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2) * self.weight))

    def distance(self, other: "FeatureVector") -> float:
        self._check(other)
        return float(np.sqrt(np.sum((self.values - other.values) ** 2) * self.weight))

    def with_values(self, values) -> "FeatureVector":
        return FeatureVector(self.angle_set, self.t_grid, values)

    def __add__(self, other):
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * float(scalar))

    __rmul__ = __mul__

    def _check(self, other):
        if self.angle_set != other.angle_set or not self.t_grid.same_as(other.t_grid):
            raise EmbeddingError("feature vectors live on different grids")


@dataclass(frozen=True, eq=False)
class Template:
    """Reference density ``I0`` with its sinogram and per-angle CDFs."""

    density: DiscreteDensity2D
    sliced: SlicedRepresentation

    @property
    def angle_set(self) -> AngleSet:
        return self.sliced.angle_set

    @property
    def t_grid(self) -> Grid1D:
        return self.sliced.t_grid

    @property
    def knots(self) -> np.ndarray:
        k = self.__dict__.get("_knots")
        if k is None:
            k = self.sliced.knots
            object.__setattr__(self, "_knots", k)
        return k

    def forward(self, density: DiscreteDensity2D) -> SlicedRepresentation:
        """Sinogram of ``density`` in this template's geometry."""
        if not density.same_grid(self.density):
            raise EmbeddingError(
                f"density grid {density.shape} does not match template grid {self.density.shape}"
            )
        return radon_forward(density, self.angle_set, t_grid=self.t_grid)

    def zero(self) -> FeatureVector:
        return FeatureVector(self.angle_set, self.t_grid, np.zeros(self.sliced.slices.shape))


def make_template(
    dataset: Sequence[DiscreteDensity2D],
    angles: AngleSet | int = DEFAULT_ANGLES,
    t_count: int | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> Template:
    """Template from the pointwise mean of ``dataset``."""
    dataset = list(dataset)
    if not dataset:
        raise EmbeddingError("cannot build a template from an empty dataset")
    first = dataset[0]
    for k, d in enumerate(dataset[1:], start=1):
        if not d.same_grid(first):
            raise EmbeddingError(f"dataset item {k} has grid {d.shape}, expected {first.shape}")
    mean = np.mean([d.values for d in dataset], axis=0)
    density = normalize_2d(mean, first.pixel_size, epsilon)
    if isinstance(angles, (int, np.integer)):
        angles = AngleSet(int(angles))
    return Template(density, radon_forward(density, angles, t_count, epsilon))


def sw_from_sliced(a: SlicedRepresentation, b: SlicedRepresentation) -> float:
    """SW distance between two sinograms on the same angle and offset grid."""
    if a.angle_set != b.angle_set or not a.t_grid.same_as(b.t_grid):
        raise EmbeddingError("sinograms live on different grids")
    edges = a.t_grid.edges
    w2 = w2_squared_knots(edges, a.knots, edges, b.knots)
    return float(np.sqrt(max(np.mean(w2), 0.0)))


def sw_distance(
    a: DiscreteDensity2D,
    b: DiscreteDensity2D,
    angles: AngleSet | int = DEFAULT_ANGLES,
    t_count: int | None = None,
) -> float:
    if not a.same_grid(b):
        raise EmbeddingError(f"grid mismatch: {a.shape} vs {b.shape}")
    return sw_from_sliced(radon_forward(a, angles, t_count), radon_forward(b, angles, t_count))


def pairwise_sw2(sliced: Sequence[SlicedRepresentation]) -> np.ndarray:
    """Matrix of squared SW distances from precomputed sinograms.

    CDF knots are formed once per sinogram; each pair then costs one batched
    1D transport over all angles.
    """
    sliced = list(sliced)
    n = len(sliced)
    if n == 0:
        return np.zeros((0, 0))
    ref = sliced[0]
    for k, s in enumerate(sliced[1:], start=1):
        if s.angle_set != ref.angle_set or not s.t_grid.same_as(ref.t_grid):
            raise EmbeddingError(f"sinogram {k} lives on a different grid than sinogram 0")
    edges = ref.t_grid.edges
    knots = [s.knots for s in sliced]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = max(np.mean(w2_squared_knots(edges, knots[i], edges, knots[j])), 0.0)
    return out


def _embed_sliced(s: SlicedRepresentation, tpl: Template) -> FeatureVector:
    if s.angle_set != tpl.angle_set or not s.t_grid.same_as(tpl.t_grid):
        raise EmbeddingError("sinogram does not match the template geometry")
    t = tpl.t_grid.positions
    tk = tpl.knots
    centres = 0.5 * (tk[:, :-1] + tk[:, 1:])
    f = _batched_quantile(tpl.t_grid.edges, s.knots, centres)
    values = (f - t[None, :]) * np.sqrt(tpl.sliced.slices)
    if np.array_equal(s.slices, tpl.sliced.slices):
        values = np.zeros_like(values)
    return FeatureVector(tpl.angle_set, tpl.t_grid, values)


def phi_embed(density: DiscreteDensity2D | SlicedRepresentation, tpl: Template) -> FeatureVector:
    """Embedding ``(f(t, theta) - t) * sqrt(R I0(t, theta))``.

    ``f(., theta)`` is the monotone map from the template slice to the slice
    of ``density`` at ``theta``. Accepts a density on the template grid or a
    sinogram already in the template geometry.
    """
    if isinstance(density, SlicedRepresentation):
        return _embed_sliced(density, tpl)
    if density is tpl.density:
        return tpl.zero()
    return _embed_sliced(tpl.forward(density), tpl)


def phi_embed_many(densities: Sequence[DiscreteDensity2D], tpl: Template) -> list[FeatureVector]:
    sliced = radon_forward_many(densities, tpl.angle_set, t_grid=tpl.t_grid)
    return [_embed_sliced(s, tpl) for s in sliced]


def invert_slices(v: FeatureVector, tpl: Template, epsilon: float = DEFAULT_EPSILON) -> SlicedRepresentation:
    """Per-angle inverse of the embedding: the sinogram whose embedding is ``v``."""
    if v.angle_set != tpl.angle_set or not v.t_grid.same_as(tpl.t_grid):
        raise EmbeddingError("feature vector does not match the template geometry")
    grid = tpl.t_grid
    t = grid.positions
    thetas = tpl.angle_set.angles
    f = t[None, :] + v.values / np.sqrt(tpl.sliced.slices)
    slack = -_MONOTONE_SLACK * grid.spacing
    bad_rows = np.flatnonzero(np.any(np.diff(f, axis=1) < slack, axis=1))
    if bad_rows.size:
        listed = ", ".join(f"{k} (theta={thetas[k]:.6g})" for k in bad_rows[:10])
        raise EmbeddingError(
            f"not a valid embedding point: recovered map decreases at angle {listed}"
            + (" ..." if bad_rows.size > 10 else "")
        )
    slices = np.empty_like(f)
    edges = grid.edges
    for k in range(f.shape[0]):
        knots = push_forward_knots(f[k], tpl.knots[k], grid, edges)
        mass = np.maximum(np.diff(knots), 0.0)
        mass = mass + epsilon * mass.sum() / mass.size
        slices[k] = mass / mass.sum() / grid.spacing
    return SlicedRepresentation(tpl.angle_set, grid, slices)


def phi_invert(v: FeatureVector, tpl: Template, epsilon: float = DEFAULT_EPSILON) -> DiscreteDensity2D:
    """Density on the template grid whose embedding is (approximately) ``v``.

    Slices are recovered exactly up to re-gridding; the 2D density is then
    assembled by filtered back-projection, which dominates the error.
    """
    sliced = invert_slices(v, tpl, epsilon)
    d = tpl.density
    return radon_inverse(sliced, d.rows, d.cols, d.pixel_size, epsilon)
