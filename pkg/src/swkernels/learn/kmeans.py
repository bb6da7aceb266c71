"""Lloyd-style k-means in the feature space of a kernel."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..kernels import GramMatrix

__all__ = ["ClusterAssignment", "kernel_kmeans", "feature_distances"]


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    labels: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    # Inertia after initialization and after every Lloyd update, best restart.
    trace: np.ndarray = field(repr=False)
    restart_traces: tuple = field(default=(), repr=False)


def feature_distances(k: np.ndarray, labels: np.ndarray, n_clusters: int) -> np.ndarray:
    """Squared feature-space distance of every point to every cluster mean.

    Empty clusters get ``inf``.
    """
    n = k.shape[0]
    member = np.zeros((n, n_clusters))
    member[np.arange(n), labels] = 1.0
    sizes = member.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = member / sizes
        cross = k @ w
        within = np.einsum("ic,ij,jc->c", w, k, w)
        d = np.diag(k)[:, None] - 2 * cross + within[None, :]
    d[:, sizes == 0] = np.inf
    return np.maximum(d, 0.0)


def _inertia(k, labels, n_clusters) -> float:
    d = feature_distances(k, labels, n_clusters)
    return float(d[np.arange(k.shape[0]), labels].sum())


def _plus_plus(k: np.ndarray, n_clusters: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding with feature-space distances; returns labels."""
    n = k.shape[0]
    diag = np.diag(k)
    centres = [int(rng.integers(n))]
    d2 = np.maximum(diag + diag[centres[0]] - 2 * k[:, centres[0]], 0.0)
    for _ in range(1, n_clusters):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            nxt = int(rng.choice(np.setdiff1d(np.arange(n), centres)))
        centres.append(nxt)
        d2 = np.minimum(d2, np.maximum(diag + diag[nxt] - 2 * k[:, nxt], 0.0))
    dist = diag[:, None] + diag[centres][None, :] - 2 * k[:, centres]
    labels = np.argmin(dist, axis=1)
    labels[centres] = np.arange(n_clusters)
    return labels


def _repair_empty(k, labels, n_clusters) -> np.ndarray:
    labels = labels.copy()
    while True:
        sizes = np.bincount(labels, minlength=n_clusters)
        empty = np.flatnonzero(sizes == 0)
        if empty.size == 0:
            return labels
        d = feature_distances(k, labels, n_clusters)
        own = d[np.arange(labels.size), labels]
        # Only points whose cluster keeps at least one other member may move.
        own = np.where(sizes[labels] > 1, own, -np.inf)
        labels[int(np.argmax(own))] = empty[0]


def _lloyd(k, labels, n_clusters, max_iter):
    labels = _repair_empty(k, labels, n_clusters)
    trace = [_inertia(k, labels, n_clusters)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        d = feature_distances(k, labels, n_clusters)
        best = np.argmin(d, axis=1)
        current = d[np.arange(labels.size), labels]
        # Keep the current cluster on ties so the loop cannot cycle.
        slack = 1e-12 * max(1.0, float(np.abs(np.diag(k)).max()))
        new = np.where(d[np.arange(labels.size), best] < current - slack, best, labels)
        new = _repair_empty(k, new, n_clusters)
        if np.array_equal(new, labels):
            converged = True
            break
        labels = new
        trace.append(_inertia(k, labels, n_clusters))
    return labels, np.array(trace), it, converged


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Renumber clusters in order of first appearance."""
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(np.argsort(first))
    return order[labels]


def kernel_kmeans(G: GramMatrix | np.ndarray, k: int, restarts: int = 10, seed: int = 0,
                  max_iter: int = 300) -> ClusterAssignment:
    """Best of ``restarts`` kernel k-means runs by inertia.

    Inertia is the within-cluster sum of squared feature-space distances.
    """
    K = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)
    n = K.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"number of clusters must be in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    rng = np.random.default_rng(seed)
    best = None
    traces = []
    for _ in range(restarts):
        init = _plus_plus(K, k, rng)
        labels, trace, iters, converged = _lloyd(K, init, k, max_iter)
        traces.append(trace)
        if best is None or trace[-1] < best[1][-1]:
            best = (labels, trace, iters, converged)
    labels, trace, iters, converged = best
    return ClusterAssignment(_canonical(labels), float(trace[-1]), iters, converged, trace, tuple(traces))
