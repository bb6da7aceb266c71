"""External clustering scores."""
from __future__ import annotations

import numpy as np

__all__ = ["v_measure", "homogeneity_completeness_v"]


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def homogeneity_completeness_v(labels_true, labels_pred) -> tuple[float, float, float]:
    labels_true = np.asarray(labels_true)
    labels_pred = np.asarray(labels_pred)
    if labels_true.shape != labels_pred.shape or labels_true.ndim != 1:
        raise ValueError(
            f"label vectors must be 1D and equally long, got {labels_true.shape} and {labels_pred.shape}"
        )
    if labels_true.size == 0:
        return 1.0, 1.0, 1.0
    _, ti = np.unique(labels_true, return_inverse=True)
    _, pi = np.unique(labels_pred, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1))
    np.add.at(table, (ti, pi), 1)
    n = table.sum()
    h_c = _entropy(table.sum(axis=1))
    h_k = _entropy(table.sum(axis=0))
    nz = table > 0
    joint = table[nz] / n
    # H(C|K) and H(K|C) from the contingency table.
    h_c_given_k = -np.sum(joint * np.log(table[nz] / np.broadcast_to(table.sum(axis=0), table.shape)[nz]))
    h_k_given_c = -np.sum(joint * np.log(table[nz] / np.broadcast_to(table.sum(axis=1)[:, None], table.shape)[nz]))
    homogeneity = 1.0 if h_c == 0 else 1.0 - h_c_given_k / h_c
    completeness = 1.0 if h_k == 0 else 1.0 - h_k_given_c / h_k
    if homogeneity + completeness == 0:
        return float(homogeneity), float(completeness), 0.0
    v = 2 * homogeneity * completeness / (homogeneity + completeness)
    return float(homogeneity), float(completeness), float(v)


def v_measure(labels_true, labels_pred) -> float:
    """Harmonic mean of homogeneity and completeness (Rosenberg & Hirschberg)."""
    return homogeneity_completeness_v(labels_true, labels_pred)[2]
