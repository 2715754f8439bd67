"""Transformed subspace clustering.

Jointly learns a sparsifying transform ``T`` (``TX ~ Z``) and self-expression
coefficients ``C`` over the transform coefficients, then clusters the samples
by normalized cuts on an affinity built from ``C``.
"""

from .errors import ConfigError, DataError, NumericalError, ParseError, TscError
from .kernels import KernelSpec, gram_matrix
from .metrics import MetricsReport, confusion, evaluate
from .solvers import TscModel, fit, fit_piecemeal, svt, update_c_llmc, update_c_lrr, update_c_ssc
from .spectral import Labeling, affinity_abs, affinity_llmc, affinity_lrr, kmeans, make_affinity, normalized_cuts
from .synthetic import SyntheticSpec, generate_synthetic
from .transform import (
    Hyperparams,
    Variant,
    joint_objective,
    soft_threshold,
    update_transform,
    update_z,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "Hyperparams",
    "KernelSpec",
    "Labeling",
    "MetricsReport",
    "NumericalError",
    "ParseError",
    "SyntheticSpec",
    "TscError",
    "TscModel",
    "Variant",
    "affinity_abs",
    "affinity_llmc",
    "affinity_lrr",
    "confusion",
    "evaluate",
    "fit",
    "fit_piecemeal",
    "generate_synthetic",
    "gram_matrix",
    "joint_objective",
    "kmeans",
    "make_affinity",
    "normalized_cuts",
    "soft_threshold",
    "svt",
    "update_c_llmc",
    "update_c_lrr",
    "update_c_ssc",
    "update_transform",
    "update_z",
]
