"""Stratified cross-validation with an inner hyperparameter search."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from ..kernels import GramMatrix
from .svm import svm_predict, svm_train

__all__ = [
    "DEFAULT_C_GRID",
    "CVError",
    "CVRow",
    "CVResult",
    "stratified_folds",
    "gamma_grid",
    "cross_validate",
]

DEFAULT_C_GRID = (0.1, 1.0, 10.0, 100.0)


class CVError(ValueError):
    pass


def stratified_folds(labels, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per sample; every class is spread as evenly as possible."""
    labels = np.asarray(labels)
    if folds < 2:
        raise CVError("need at least 2 folds")
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < folds:
        small = classes[np.argmin(counts)]
        raise CVError(f"class {small!r} has {counts.min()} samples, fewer than {folds} folds")
    out = np.empty(labels.size, dtype=int)
    start = 0
    for c in classes:
        idx = rng.permutation(np.flatnonzero(labels == c))
        out[idx] = (start + np.arange(idx.size)) % folds
        start = (start + idx.size) % folds
    return out


def gamma_grid(sw2: np.ndarray, exponents: Sequence[int] = (-2, -1, 0, 1, 2)) -> list[float]:
    """Powers of ten divided by the median positive squared distance."""
    off = sw2[np.triu_indices_from(sw2, k=1)]
    off = off[off > 0]
    med = float(np.median(off)) if off.size else 1.0
    return [10.0**e / med for e in exponents]


@dataclass(frozen=True)
class CVRow:
    kernel: str
    repeat: int
    fold: int
    accuracy: float
    chosen: str
    C: float


@dataclass(frozen=True, eq=False)
class CVResult:
    rows: tuple
    repeats: int
    folds: int
    # Accuracy over all test folds of a repeat, per kernel name.
    per_repeat: Mapping[str, np.ndarray] = field(repr=False)

    def summary(self) -> dict[str, tuple[float, float]]:
        """``name -> (mean, std)`` of the per-repeat accuracies."""
        return {
            name: (float(np.mean(acc)), float(np.std(acc)))
            for name, acc in self.per_repeat.items()
        }


def _accuracy(K, labels, train, test, C, tol) -> float:
    model = svm_train(K[np.ix_(train, train)], labels[train], C=C, tol=tol)
    pred = svm_predict(model, K[np.ix_(test, train)])
    return float(np.mean(pred == labels[test]))


def _select(candidates, labels, train, C_grid, inner_folds, tol, rng):
    combos = list(product(range(len(candidates)), C_grid))
    if len(combos) == 1:
        return combos[0]
    sub = labels[train]
    counts = np.unique(sub, return_counts=True)[1]
    k = min(inner_folds, int(counts.min()))
    if k < 2:
        return combos[0]
    fold_of = stratified_folds(sub, k, rng)
    scores = []
    for ci, C in combos:
        K = candidates[ci]
        acc = []
        for f in range(k):
            tr, te = train[fold_of != f], train[fold_of == f]
            acc.append(_accuracy(K, labels, tr, te, C, tol))
        scores.append(np.mean(acc))
    # First best wins: candidates are ordered from weakest to strongest.
    return combos[int(np.argmax(scores))]


def cross_validate(
    candidates: Mapping[str, Sequence[GramMatrix]],
    labels,
    folds: int = 5,
    repeats: int = 1,
    seed: int = 0,
    C_grid: Sequence[float] = DEFAULT_C_GRID,
    inner_folds: int = 3,
    tol: float = 1e-3,
) -> CVResult:
    """Repeated stratified k-fold SVM accuracy for each named kernel family.

    ``candidates`` maps a kernel name to its hyperparameter grid, given as
    full Gram matrices over the dataset. For each outer training split the
    (Gram, C) pair is chosen by an inner stratified CV on the training part
    only. Every kernel sees the same splits.
    """
    labels = np.asarray(labels)
    if repeats < 1:
        raise CVError("repeats must be at least 1")
    if not candidates:
        raise CVError("no kernels to evaluate")
    mats = {}
    for name, grid in candidates.items():
        grid = list(grid)
        if not grid:
            raise CVError(f"empty hyperparameter grid for {name!r}")
        mats[name] = [g.entries if isinstance(g, GramMatrix) else np.asarray(g, float) for g in grid]
        for K in mats[name]:
            if K.shape != (labels.size, labels.size):
                raise CVError(f"Gram matrix for {name!r} has shape {K.shape}, expected {labels.size}")
    specs = {name: list(grid) for name, grid in candidates.items()}
    rng = np.random.default_rng(seed)
    rows = []
    per_repeat = {name: np.zeros(repeats) for name in mats}
    for r in range(repeats):
        fold_of = stratified_folds(labels, folds, rng)
        inner_seed = int(rng.integers(2**32))
        correct = {name: 0 for name in mats}
        for f in range(folds):
            train = np.flatnonzero(fold_of != f)
            test = np.flatnonzero(fold_of == f)
            for name, grid in mats.items():
                inner_rng = np.random.default_rng([inner_seed, f])
                ci, C = _select(grid, labels, train, C_grid, inner_folds, tol, inner_rng)
                acc = _accuracy(grid[ci], labels, train, test, C, tol)
                correct[name] += acc * test.size
                g = specs[name][ci]
                chosen = g.spec.label() if isinstance(g, GramMatrix) and g.spec else f"#{ci}"
                rows.append(CVRow(name, r, f, acc, chosen, float(C)))
        for name in mats:
            per_repeat[name][r] = correct[name] / labels.size
    return CVResult(tuple(rows), repeats, folds, per_repeat)
