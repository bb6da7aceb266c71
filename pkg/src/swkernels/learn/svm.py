"""Soft-margin kernel SVM trained by SMO, one-vs-one for several classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..kernels import EmbeddedDataset, GramMatrix, KernelSpec
from ..sliced import FeatureVector, phi_invert

__all__ = [
    "SvmError",
    "BinarySvm",
    "SvmModel",
    "smo",
    "svm_train",
    "svm_decision_values",
    "svm_predict",
    "svm_decision_axis",
]

_TAU = 1e-12


class SvmError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BinarySvm:
    """``decision(x) = sum_t alpha_t y_t k(x_t, x) - rho``; positive means ``positive``."""

    positive: object
    negative: object
    index: np.ndarray  # rows of the training Gram used by this problem
    alpha: np.ndarray
    y: np.ndarray
    rho: float
    kkt_violation: float
    iterations: int
    dual_trace: np.ndarray = field(repr=False)

    @property
    def support(self) -> np.ndarray:
        return self.index[self.alpha > 0]

    def decision(self, k_rows: np.ndarray) -> np.ndarray:
        """``k_rows`` holds kernel values against the *full* training set."""
        return k_rows[:, self.index] @ (self.alpha * self.y) - self.rho


@dataclass(frozen=True, eq=False)
class SvmModel:
    classes: tuple
    binaries: tuple
    spec: KernelSpec | None
    C: float


def smo(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-4, max_iter: int = 1_000_000):
    """Solve ``max sum(a) - a'Qa/2`` s.t. ``0 <= a <= C``, ``y'a = 0``.

    Working pairs are the maximal KKT violators. Returns
    ``(alpha, rho, violation, iterations, dual_trace)``; the trace holds the
    dual objective after initialization and after every step.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    Q = (y[:, None] * y[None, :]) * K
    diag = np.diag(K)
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the primal-form objective a'Qa/2 - sum(a)
    trace = [0.0]
    violation = np.inf
    it = 0
    for it in range(max_iter):
        score = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            violation = 0.0
            break
        i = int(np.flatnonzero(up)[np.argmax(score[up])])
        j = int(np.flatnonzero(low)[np.argmin(score[low])])
        violation = score[i] - score[j]
        if violation < tol:
            break
        eta = max(diag[i] + diag[j] - 2 * K[i, j], _TAU)
        step = violation / eta
        step = min(
            step,
            C - alpha[i] if y[i] > 0 else alpha[i],
            alpha[j] if y[j] > 0 else C - alpha[j],
        )
        old_i, old_j = alpha[i], alpha[j]
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        # Snap to the box so bound membership is exact.
        for t in (i, j):
            if alpha[t] < 1e-14 * C:
                alpha[t] = 0.0
            elif alpha[t] > C * (1 - 1e-14):
                alpha[t] = C
        grad += Q[:, i] * (alpha[i] - old_i) + Q[:, j] * (alpha[j] - old_j)
        trace.append(-0.5 * float(alpha @ (grad - 1.0)))
    else:
        it = max_iter
    rho = _rho(alpha, y, grad, C)
    return alpha, rho, float(violation), it, np.array(trace)


def _rho(alpha, y, grad, C) -> float:
    yg = y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(yg[free].mean())
    at_upper = alpha >= C
    ub_mask = (at_upper & (y < 0)) | (~at_upper & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (~at_upper & (y < 0))
    ub = yg[ub_mask].min() if ub_mask.any() else np.inf
    lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
    if not np.isfinite(ub):
        return float(lb)
    if not np.isfinite(lb):
        return float(ub)
    return float(0.5 * (ub + lb))


def svm_train(G: GramMatrix | np.ndarray, labels, C: float = 1.0, tol: float = 1e-4,
              max_iter: int = 1_000_000) -> SvmModel:
    """One-vs-one SVM over all label pairs on a precomputed Gram matrix."""
    K = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)
    spec = G.spec if isinstance(G, GramMatrix) else None
    labels = np.asarray(labels)
    if labels.shape != (K.shape[0],):
        raise SvmError(f"{labels.size} labels for a {K.shape[0]}-point Gram matrix")
    if not C > 0:
        raise SvmError("C must be positive")
    classes = tuple(np.unique(labels).tolist())
    if len(classes) < 2:
        raise SvmError("need at least two classes to train an SVM")
    binaries = []
    for a, b in combinations(classes, 2):
        idx = np.flatnonzero((labels == a) | (labels == b))
        y = np.where(labels[idx] == a, 1.0, -1.0)
        alpha, rho, viol, iters, trace = smo(K[np.ix_(idx, idx)], y, C, tol, max_iter)
        binaries.append(BinarySvm(a, b, idx, alpha, y, rho, viol, iters, trace))
    return SvmModel(classes, tuple(binaries), spec, float(C))


def svm_decision_values(model: SvmModel, k_rows) -> np.ndarray:
    """Decision values, one column per binary problem."""
    k_rows = np.atleast_2d(np.asarray(k_rows, dtype=float))
    return np.stack([b.decision(k_rows) for b in model.binaries], axis=1)


def svm_predict(model: SvmModel, k_rows) -> np.ndarray:
    """Majority vote; ties go to the class with the larger summed decision value."""
    dv = svm_decision_values(model, k_rows)
    pos = {c: i for i, c in enumerate(model.classes)}
    votes = np.zeros((dv.shape[0], len(model.classes)))
    strength = np.zeros_like(votes)
    for col, b in enumerate(model.binaries):
        d = dv[:, col]
        p, q = pos[b.positive], pos[b.negative]
        votes[:, p] += d > 0
        votes[:, q] += d <= 0
        strength[:, p] += d
        strength[:, q] -= d
    top = votes == votes.max(axis=1, keepdims=True)
    winner = np.argmax(np.where(top, strength, -np.inf), axis=1)
    return np.asarray(model.classes)[winner]


def svm_decision_axis(model: SvmModel, train: EmbeddedDataset, steps: int,
                      span: float | None = None):
    """Densities sampled along the normal of a linear-``phi`` SVM hyperplane.

    The samples are ``phi^-1(mean + s * w / |w|)`` where ``mean`` is the
    mean embedding of ``train`` and ``s`` runs over ``steps`` values evenly
    spaced in ``[-span, span]``. ``span`` defaults to the larger offset of
    the two class-mean embeddings from ``mean`` along the axis, so the ends
    sit at the class modes.

    Returns ``(s_values, densities, decision_values)``; decision values are
    those of the hyperplane at the sampled embeddings.
    """
    if model.spec is None or model.spec.kind != "linear_phi":
        raise SvmError("explicit axis requires linear kernel (linear_phi)")
    if len(model.binaries) != 1:
        raise SvmError("explicit axis requires a binary model")
    if steps < 1:
        raise SvmError("steps must be at least 1")
    b = model.binaries[0]
    X = train.features
    w = (b.alpha * b.y) @ X[b.index]
    norm = np.linalg.norm(w)
    if norm == 0:
        raise SvmError("degenerate hyperplane: w = 0")
    u = w / norm
    mean = X.mean(axis=0)
    if span is None:
        proj = (X[b.index] - mean) @ u
        span = float(max(abs(proj[b.y > 0].mean()), abs(proj[b.y < 0].mean())))
    s_values = np.array([0.0]) if steps == 1 else np.linspace(-span, span, steps)
    tpl = train.template
    scale = np.sqrt(tpl.t_grid.spacing / tpl.angle_set.count)
    shape = tpl.sliced.slices.shape
    densities = []
    for s in s_values:
        vec = mean + s * u
        fv = FeatureVector(tpl.angle_set, tpl.t_grid, (vec / scale).reshape(shape))
        try:
            densities.append(phi_invert(fv, tpl))
        except ValueError as exc:
            raise SvmError(f"axis sample s={s:.6g}: {exc}") from None
    decision = (mean + s_values[:, None] * u) @ w - b.rho
    return s_values, densities, decision
