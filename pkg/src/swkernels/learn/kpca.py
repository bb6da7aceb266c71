"""Kernel PCA on a precomputed Gram matrix."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..kernels import GramMatrix, KernelSpec

__all__ = ["KpcaModel", "KpcaError", "kpca_fit", "kpca_project", "center_gram"]

CLAMP_RELATIVE = 1e-10


class KpcaError(ValueError):
    pass


def center_gram(k: np.ndarray) -> np.ndarray:
    """Double centring ``H K H`` with ``H = I - 11'/n``."""
    row = k.mean(axis=0, keepdims=True)
    col = k.mean(axis=1, keepdims=True)
    return k - row - col + k.mean()


@dataclass(frozen=True, eq=False)
class KpcaModel:
    eigenvalues: np.ndarray  # descending, clamped at zero
    eigenvectors: np.ndarray = field(repr=False)
    train_gram: np.ndarray = field(repr=False)
    spec: KernelSpec | None = None
    clamped: int = 0  # how many eigenvalues were set to zero

    @property
    def n_components(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > 0))

    def cpv(self, m: int) -> float:
        """Cumulative percent variance of the top ``m`` components."""
        total = self.eigenvalues.sum()
        return float(100.0 * self.eigenvalues[:m].sum() / total)

    def cpv_curve(self) -> np.ndarray:
        return 100.0 * np.cumsum(self.eigenvalues) / self.eigenvalues.sum()

    def components_for(self, percent: float) -> int:
        """Smallest ``m`` with ``cpv(m) >= percent``."""
        curve = self.cpv_curve()
        return int(np.searchsorted(curve, percent - 1e-9) + 1)

    def training_coordinates(self, m: int | None = None) -> np.ndarray:
        m = self.n_components if m is None else m
        self._check_m(m)
        return self.eigenvectors[:, :m] * np.sqrt(self.eigenvalues[:m])

    def _check_m(self, m: int) -> None:
        if not 1 <= m <= self.n_components:
            raise KpcaError(f"requested {m} components, model retains {self.n_components}")


def kpca_fit(G: GramMatrix | np.ndarray, spec: KernelSpec | None = None) -> KpcaModel:
    k = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)
    spec = G.spec if isinstance(G, GramMatrix) else spec
    n = k.shape[0]
    if n < 2:
        raise KpcaError("kernel PCA needs at least two points")
    kc = center_gram(0.5 * (k + k.T))
    w, v = np.linalg.eigh(kc)
    w, v = w[::-1], v[:, ::-1]
    scale = max(np.abs(k).max(), np.finfo(float).tiny)
    if w[0] <= 1e-12 * scale:
        raise KpcaError("no variance: the centred Gram matrix vanishes")
    small = w < CLAMP_RELATIVE * w[0]
    w = np.where(small, 0.0, w)
    # Sign convention: largest-magnitude loading positive, for reproducible output.
    pivots = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[pivots, np.arange(n)])
    return KpcaModel(w, v, k.copy(), spec, int(np.count_nonzero(small)))


def kpca_project(model: KpcaModel, g_new, m: int) -> np.ndarray:
    """Coordinates of new points from their kernel rows against the training set."""
    model._check_m(m)
    g_new = np.atleast_2d(np.asarray(g_new, dtype=float))
    k = model.train_gram
    if g_new.shape[1] != k.shape[0]:
        raise KpcaError(f"kernel rows have {g_new.shape[1]} columns, training set has {k.shape[0]}")
    centred = (
        g_new
        - g_new.mean(axis=1, keepdims=True)
        - k.mean(axis=0, keepdims=True)
        + k.mean()
    )
    return centred @ (model.eigenvectors[:, :m] / np.sqrt(model.eigenvalues[:m]))
