"""Sliced Wasserstein kernels, Euclidean baselines and PD/CND certificates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .density import DiscreteDensity2D
from .radon import DEFAULT_ANGLES, AngleSet, SlicedRepresentation, radon_forward_many
from .sliced import (
    Template,
    _embed_sliced,
    pairwise_sw2,
    phi_embed,
    sw_distance,
)
from .transport import w2_squared_knots

__all__ = [
    "KERNEL_KINDS",
    "KernelError",
    "KernelSpec",
    "GramMatrix",
    "EmbeddedDataset",
    "PdCertificate",
    "CndCertificate",
    "sw_gaussian",
    "sw_polynomial",
    "embed_dataset",
    "kernel_matrix",
    "gram",
    "certify_pd",
    "certify_cnd",
]

KERNEL_KINDS = ("sw_gaussian", "sw_poly", "linear_phi", "euclid_rbf", "euclid_linear", "euclid_poly")
GAUSSIAN_KINDS = ("sw_gaussian", "euclid_rbf")
POLY_KINDS = ("sw_poly", "euclid_poly")


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float = 1.0
    degree: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise KernelError(f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.kind in GAUSSIAN_KINDS and not self.gamma > 0:
            raise KernelError(f"gamma must be positive, got {self.gamma}")
        if self.kind in POLY_KINDS:
            if int(self.degree) != self.degree or self.degree < 1:
                raise KernelError(f"degree must be a positive integer, got {self.degree}")
            if self.offset not in (0, 1):
                raise KernelError(f"offset must be 0 or 1, got {self.offset}")

    @property
    def is_gaussian(self) -> bool:
        return self.kind in GAUSSIAN_KINDS

    @property
    def uses_template(self) -> bool:
        return self.kind in ("sw_poly", "linear_phi")

    def label(self) -> str:
        if self.kind in GAUSSIAN_KINDS:
            return f"{self.kind}(gamma={self.gamma:.6g})"
        if self.kind in POLY_KINDS:
            return f"{self.kind}(degree={self.degree},offset={self.offset})"
        return self.kind


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray = field(repr=False)
    spec: KernelSpec
    min_eigenvalue: float
    max_eigenvalue: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_entries(cls, entries, spec: KernelSpec) -> "GramMatrix":
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise KernelError(f"Gram matrix must be square, got {entries.shape}")
        entries = 0.5 * (entries + entries.T)
        if spec.is_gaussian:
            np.fill_diagonal(entries, 1.0)
        eig = np.linalg.eigvalsh(entries)
        entries.setflags(write=False)
        return cls(entries, spec, float(eig[0]), float(eig[-1]))


@dataclass(frozen=True, eq=False)
class EmbeddedDataset:
    """Everything the kernels need about a dataset, computed once.

    Holds the sinograms, the ``phi`` embeddings (flattened and scaled so that
    a plain dot product is the embedding inner product) and the raw cell
    masses for the Euclidean baselines.
    """

    template: Template
    sliced: list = field(repr=False)
    features: np.ndarray = field(repr=False)
    raw: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.sliced)

    def sw2(self) -> np.ndarray:
        d = self.__dict__.get("_sw2")
        if d is None:
            d = pairwise_sw2(self.sliced)
            d.setflags(write=False)
            object.__setattr__(self, "_sw2", d)
        return d

    def subset(self, idx) -> "EmbeddedDataset":
        idx = list(np.asarray(idx, dtype=int))
        sub = EmbeddedDataset(
            self.template,
            [self.sliced[i] for i in idx],
            self.features[idx],
            self.raw[idx],
        )
        if "_sw2" in self.__dict__:
            object.__setattr__(sub, "_sw2", self._sw2[np.ix_(idx, idx)])
        return sub


def embed_dataset(dataset: Sequence[DiscreteDensity2D], tpl: Template) -> EmbeddedDataset:
    dataset = list(dataset)
    if not dataset:
        raise KernelError("empty dataset")
    for k, d in enumerate(dataset):
        if not d.same_grid(tpl.density):
            raise KernelError(f"dataset item {k} has grid {d.shape}, template has {tpl.density.shape}")
    sliced = radon_forward_many(dataset, tpl.angle_set, t_grid=tpl.t_grid)
    scale = np.sqrt(tpl.t_grid.spacing / tpl.angle_set.count)
    features = np.stack([_embed_sliced(s, tpl).values.ravel() * scale for s in sliced])
    raw = np.stack([d.masses.ravel() for d in dataset])
    return EmbeddedDataset(tpl, sliced, features, raw)


def _cross_sw2(a: list[SlicedRepresentation], b: list[SlicedRepresentation]) -> np.ndarray:
    if not a or not b:
        return np.zeros((len(a), len(b)))
    edges = a[0].t_grid.edges
    ka = [s.knots for s in a]
    kb = [s.knots for s in b]
    out = np.empty((len(a), len(b)))
    for i, x in enumerate(ka):
        for j, y in enumerate(kb):
            out[i, j] = max(np.mean(w2_squared_knots(edges, x, edges, y)), 0.0)
    return out


def kernel_matrix(a: EmbeddedDataset, b: EmbeddedDataset, spec: KernelSpec) -> np.ndarray:
    """Kernel values between every item of ``a`` (rows) and of ``b`` (columns)."""
    kind = spec.kind
    with np.errstate(over="ignore"):
        return _kernel_values(a, b, spec, kind)


def _kernel_values(a: EmbeddedDataset, b: EmbeddedDataset, spec: KernelSpec, kind: str) -> np.ndarray:
    if kind == "sw_gaussian":
        d2 = a.sw2() if a is b else _cross_sw2(a.sliced, b.sliced)
        return np.exp(-spec.gamma * d2)
    if kind in ("linear_phi", "sw_poly"):
        inner = a.features @ b.features.T
        if kind == "linear_phi":
            return inner
        return (inner + spec.offset) ** spec.degree
    inner = a.raw @ b.raw.T
    if kind == "euclid_linear":
        return inner
    if kind == "euclid_poly":
        return (inner + spec.offset) ** spec.degree
    sq_a = np.sum(a.raw**2, axis=1)
    sq_b = np.sum(b.raw**2, axis=1)
    d2 = np.maximum(sq_a[:, None] + sq_b[None, :] - 2 * inner, 0.0)
    return np.exp(-spec.gamma * d2)


def gram(dataset, spec: KernelSpec, tpl: Template | None = None) -> GramMatrix:
    """Gram matrix of ``spec`` over ``dataset``.

    ``dataset`` is a list of densities (then ``tpl`` is required, and is also
    what fixes the angle grid for ``sw_gaussian``) or an
    :class:`EmbeddedDataset`.
    """
    if not isinstance(dataset, EmbeddedDataset):
        if tpl is None:
            raise KernelError("a template is required to embed raw densities")
        dataset = embed_dataset(dataset, tpl)
    k = kernel_matrix(dataset, dataset, spec)
    if not np.all(np.isfinite(k)):
        i, j = np.argwhere(~np.isfinite(k))[0]
        raise KernelError(f"non-finite kernel value for pair ({i}, {j})")
    return GramMatrix.from_entries(k, spec)


def sw_gaussian(a: DiscreteDensity2D, b: DiscreteDensity2D, gamma: float,
                angles: AngleSet | int = DEFAULT_ANGLES, t_count: int | None = None) -> float:
    """``exp(-gamma * SW(a, b)^2)``."""
    if not gamma > 0:
        raise KernelError(f"gamma must be positive, got {gamma}")
    return float(np.exp(-gamma * sw_distance(a, b, angles, t_count) ** 2))


def sw_polynomial(a: DiscreteDensity2D, b: DiscreteDensity2D, tpl: Template,
                  degree: int = 1, offset: int = 0) -> float:
    """``(<phi(a), phi(b)> + offset) ** degree``."""
    KernelSpec("sw_poly", degree=degree, offset=offset)
    inner = phi_embed(a, tpl).inner(phi_embed(b, tpl))
    return float((inner + offset) ** degree)


@dataclass(frozen=True)
class PdCertificate:
    passed: bool
    min_eigenvalue: float
    max_eigenvalue: float
    threshold: float
    # Eigenvector of the offending eigenvalue: coefficients c with c'Kc < 0.
    witness: np.ndarray | None = None


def certify_pd(G, tolerance: float = 1e-8, relative: bool = True) -> PdCertificate:
    """Empirical positive-definiteness check of a symmetric matrix.

    Passes iff the smallest eigenvalue is at least ``-tolerance`` (times the
    largest eigenvalue magnitude when ``relative``).
    """
    k = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)
    k = 0.5 * (k + k.T)
    w, v = np.linalg.eigh(k)
    scale = max(abs(w[0]), abs(w[-1])) if relative else 1.0
    threshold = -tolerance * (scale if scale > 0 else 1.0)
    if w[0] >= threshold:
        return PdCertificate(True, float(w[0]), float(w[-1]), threshold)
    return PdCertificate(False, float(w[0]), float(w[-1]), threshold, v[:, 0].copy())


@dataclass(frozen=True)
class CndCertificate:
    passed: bool
    max_form: float
    trials: int
    # Largest eigenvalue of D restricted to zero-sum vectors (<= 0 iff CND).
    max_projected_eigenvalue: float
    witness: np.ndarray | None = None


def certify_cnd(d2, trials: int = 1000, tolerance: float = 1e-8, seed: int = 0) -> CndCertificate:
    """Randomized conditional-negative-definiteness check.

    Draws ``trials`` zero-sum coefficient vectors of unit norm and evaluates
    ``c' D c`` for each. Passes iff none exceeds ``tolerance``.
    """
    d2 = np.asarray(d2, dtype=float)
    n = d2.shape[0]
    if d2.shape != (n, n):
        raise KernelError("distance matrix must be square")
    if not np.allclose(d2, d2.T, rtol=0, atol=1e-12 * max(1.0, np.abs(d2).max(initial=0))):
        raise KernelError("distance matrix must be symmetric")
    if np.any(np.diag(d2) != 0):
        raise KernelError("distance matrix must have a zero diagonal")
    if n < 2:
        return CndCertificate(True, 0.0, 0, 0.0)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((trials, n))
    c -= c.mean(axis=1, keepdims=True)
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    forms = np.einsum("ti,ij,tj->t", c, d2, c)
    centering = np.eye(n) - 1.0 / n
    projected = np.linalg.eigvalsh(centering @ d2 @ centering)
    worst = int(np.argmax(forms))
    passed = bool(forms[worst] <= tolerance)
    return CndCertificate(
        passed,
        float(forms[worst]),
        trials,
        float(projected[-1]),
        None if passed else c[worst].copy(),
    )
