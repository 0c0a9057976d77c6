"""Model-agnostic functional decomposition of black-box predictions.

Given a sample of feature vectors and the corresponding predictions of an
arbitrary model, this package estimates a generalized (Hoeffding-style)
additive decomposition into main effects and low-order interactions using
an inverse-density-weighted Legendre basis, then reports component curves,
per-feature attributions and orthogonality diagnostics.
"""

from .basis import (
    DesignMatrix,
    TruncationSet,
    build_design_matrix,
    enumerate_truncation,
    truncation_size,
    weighted_basis_value,
)
from .benchmarks import BENCHMARK_CASES, FgmCase, GaussTanhCase, UniformCubeDensity
from .density import DensityModel, eval_density, fit_density
from .diagnostics import (
    CosineEntry,
    MetricsReport,
    compute_metrics,
    cosine_table,
    max_corr,
    reconstruction_r2,
)
from .io import Dataset, build_export_bundle, ingest_csv, load_model, save_model
from .legendre import TensorIndex, legendre_all, legendre_normalized_all, tensor_basis_value
from .model import Attribution, DecompositionModel, FitConfig, fit_decomposition
from .scaling import ScalerParams, fit_scaler, inverse_transform, transform
from .solver import LarsPath, LarsStep, SolveReport, bic_select, lars_path, solve_reduced

__version__ = "0.1.0"

__all__ = [
    "Attribution",
    "BENCHMARK_CASES",
    "CosineEntry",
    "Dataset",
    "DecompositionModel",
    "DensityModel",
    "DesignMatrix",
    "FgmCase",
    "FitConfig",
    "GaussTanhCase",
    "LarsPath",
    "LarsStep",
    "MetricsReport",
    "ScalerParams",
    "SolveReport",
    "TensorIndex",
    "TruncationSet",
    "UniformCubeDensity",
    "bic_select",
    "build_design_matrix",
    "build_export_bundle",
    "compute_metrics",
    "cosine_table",
    "enumerate_truncation",
    "eval_density",
    "fit_decomposition",
    "fit_density",
    "fit_scaler",
    "ingest_csv",
    "inverse_transform",
    "lars_path",
    "legendre_all",
    "legendre_normalized_all",
    "load_model",
    "max_corr",
    "reconstruction_r2",
    "save_model",
    "solve_reduced",
    "tensor_basis_value",
    "transform",
    "truncation_size",
    "weighted_basis_value",
]
