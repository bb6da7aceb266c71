"""Kernel learning on precomputed Gram matrices."""
from .kmeans import ClusterAssignment, kernel_kmeans
from .kpca import KpcaError, KpcaModel, kpca_fit, kpca_project
from .metrics import homogeneity_completeness_v, v_measure
from .svm import (
    SvmError,
    SvmModel,
    svm_decision_axis,
    svm_decision_values,
    svm_predict,
    svm_train,
)
from .validation import CVResult, cross_validate, gamma_grid, stratified_folds

__all__ = [
    "ClusterAssignment",
    "kernel_kmeans",
    "KpcaError",
    "KpcaModel",
    "kpca_fit",
    "kpca_project",
    "homogeneity_completeness_v",
    "v_measure",
    "SvmError",
    "SvmModel",
    "svm_decision_axis",
    "svm_decision_values",
    "svm_predict",
    "svm_train",
    "CVResult",
    "cross_validate",
    "gamma_grid",
    "stratified_folds",
]
