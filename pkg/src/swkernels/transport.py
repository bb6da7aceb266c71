"""Closed-form optimal transport between 1D densities.

In one dimension the monotone rearrangement ``f = Q_target o F_source`` is the
unique optimal map for the quadratic cost. Because densities are piecewise
constant on their cells, ``F`` and ``Q`` are piecewise linear and every
quantity below is computed without quadrature error, except the embedding
which samples ``f`` at cell centres.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import (
    DEFAULT_EPSILON,
    DiscreteDensity1D,
    Grid1D,
    _quantile_knots,
    cdf,
    normalize_1d,
)

__all__ = [
    "TransportError",
    "TransportMap1D",
    "transport_map",
    "wasserstein2_1d",
    "psi_embed",
    "psi_invert",
    "riemann_norm",
    "w2_squared_knots",
]

# Relative slack on monotonicity of a recovered map, in units of grid spacing.
_MONOTONE_SLACK = 1e-9


class TransportError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TransportMap1D:
    """Values of a monotone map ``f`` at the sample positions of ``grid``."""

    grid: Grid1D
    values: np.ndarray

    def __call__(self, x):
        # Linear between samples, affine continuation outside.
        pos = self.grid.positions
        x = np.asarray(x, dtype=float)
        out = np.interp(x, pos, self.values)
        left = x < pos[0]
        right = x > pos[-1]
        if np.any(left | right):
            lo_slope = (self.values[1] - self.values[0]) / self.grid.spacing
            hi_slope = (self.values[-1] - self.values[-2]) / self.grid.spacing
            out = np.where(left, self.values[0] + lo_slope * (x - pos[0]), out)
            out = np.where(right, self.values[-1] + hi_slope * (x - pos[-1]), out)
        return out

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) >= -_MONOTONE_SLACK * self.grid.spacing))


def _require_positive(*densities: DiscreteDensity1D) -> None:
    for d in densities:
        if not d.is_positive():
            raise TransportError("positivity violated: transport needs strictly positive densities")


def _center_cdf(d: DiscreteDensity1D) -> np.ndarray:
    """CDF at cell centres: everything left of the cell plus half of it."""
    knots = cdf(d).knots
    return 0.5 * (knots[:-1] + knots[1:])


def transport_map(source: DiscreteDensity1D, target: DiscreteDensity1D) -> TransportMap1D:
    """Monotone map pushing ``source`` onto ``target``, sampled on the source grid."""
    _require_positive(source, target)
    values = _quantile_knots(target.grid.edges, cdf(target).knots, _center_cdf(source))
    values.setflags(write=False)
    return TransportMap1D(source.grid, values)


def _batched_quantile(edges: np.ndarray, knots: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Row-wise quantile for stacks of CDFs sharing one edge vector.

    ``knots`` has shape (L, K) and ``p`` shape (L, M); each row is an
    independent CDF. Rows are offset by 2 so a single flat searchsorted
    serves all of them.
    """
    L, K = knots.shape
    offset = 2.0 * np.arange(L)[:, None]
    flat = (knots + offset).ravel()
    idx = np.searchsorted(flat, (p + offset).ravel(), side="left").reshape(p.shape)
    idx = idx - K * np.arange(L)[:, None]
    idx = np.clip(idx, 1, K - 1)
    rows = np.arange(L)[:, None]
    lo = knots[rows, idx - 1]
    hi = knots[rows, idx]
    width = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(width > 0, (p - lo) / width, 1.0)
    frac = np.clip(frac, 0.0, 1.0)
    out = edges[idx - 1] + frac * (edges[idx] - edges[idx - 1])
    return np.where(p <= 0, edges[0], out)


def w2_squared_knots(edges_s, knots_s, edges_t, knots_t) -> np.ndarray:
    """Squared W2 between stacks of piecewise-linear CDFs, row by row.

    Evaluates ``int (f(x) - x)^2 I_s(x) dx`` over the source domain. The
    source cells are split wherever ``f`` crosses a target cell edge; on each
    piece both ``x`` and ``f(x)`` are affine in the source mass coordinate
    ``p = F_s(x)`` (with ``dp = I_s(x) dx``), so the integral of the squared
    displacement is exact.
    """
    knots_s = np.atleast_2d(knots_s)
    knots_t = np.atleast_2d(knots_t)
    p = np.sort(np.concatenate([knots_s, knots_t], axis=1), axis=1)
    x = _batched_quantile(np.asarray(edges_s), knots_s, p)
    fx = _batched_quantile(np.asarray(edges_t), knots_t, p)
    d = fx - x
    dp = np.diff(p, axis=1)
    d0, d1 = d[:, :-1], d[:, 1:]
    return np.sum(dp * (d0 * d0 + d0 * d1 + d1 * d1), axis=1) / 3.0


def wasserstein2_1d(source: DiscreteDensity1D, target: DiscreteDensity1D) -> float:
    """Quadratic Wasserstein distance between two positive 1D densities."""
    _require_positive(source, target)
    w2 = w2_squared_knots(
        source.grid.edges, cdf(source).knots, target.grid.edges, cdf(target).knots
    )[0]
    return float(np.sqrt(max(w2, 0.0)))


def psi_embed(density: DiscreteDensity1D, template: DiscreteDensity1D) -> np.ndarray:
    """Linear embedding ``(f(x) - x) * sqrt(I0(x))`` over the template grid.

    ``f`` pushes the template onto ``density``. Euclidean distances between
    embeddings, taken with the Riemann weight ``template.grid.spacing``,
    approximate W2 distances between the densities.
    """
    f = transport_map(template, density)
    out = (f.values - template.positions) * np.sqrt(template.values)
    if density.grid.same_as(template.grid) and np.array_equal(density.values, template.values):
        out = np.zeros_like(out)
    return out


def riemann_norm(v, grid: Grid1D) -> float:
    return float(np.sqrt(np.sum(np.square(v)) * grid.spacing))


def recovered_map(v, template: DiscreteDensity1D) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (template.grid.count,):
        raise TransportError(f"embedding has shape {v.shape}, template grid has {template.grid.count} samples")
    return template.positions + v / np.sqrt(template.values)


def push_forward_knots(f: np.ndarray, template_knots: np.ndarray, grid: Grid1D, out_edges: np.ndarray) -> np.ndarray:
    """CDF knots on ``out_edges`` of the template pushed through ``f``.

    ``f`` holds map values at the template cell centres; it is extended to
    the cell edges by linear interpolation, and each template cell's mass is
    spread uniformly over its image interval. Mass falling outside the output
    range is piled into the first and last cells.
    """
    f_edges = np.empty(f.size + 1)
    f_edges[1:-1] = 0.5 * (f[:-1] + f[1:])
    f_edges[0] = f[0] - 0.5 * (f[1] - f[0])
    f_edges[-1] = f[-1] + 0.5 * (f[-1] - f[-2])
    # Ties in a flat stretch of f would break np.interp; nudge them apart.
    f_edges = np.maximum.accumulate(f_edges)
    out = np.interp(out_edges, f_edges, template_knots)
    out[0] = 0.0
    out[-1] = 1.0
    return out


def psi_invert(v, template: DiscreteDensity1D, epsilon: float = DEFAULT_EPSILON) -> DiscreteDensity1D:
    """Density whose embedding against ``template`` is ``v``.

    Raises :class:`TransportError` if the recovered map is not monotone, i.e.
    ``v`` is not the image of any density.
    """
    f = recovered_map(v, template)
    step = np.diff(f)
    if np.any(step < -_MONOTONE_SLACK * template.grid.spacing):
        bad = int(np.argmax(step < -_MONOTONE_SLACK * template.grid.spacing))
        raise TransportError(
            f"not a valid embedding point: recovered map decreases at sample {bad}"
        )
    knots = push_forward_knots(f, cdf(template).knots, template.grid, template.grid.edges)
    return normalize_1d(np.maximum(np.diff(knots), 0.0), template.grid, epsilon)
