"""Bootstrap inference for stationary functional time series.

The package estimates the long-run covariance surface of a sample of
curves with a kernel lag-window estimator and a plug-in bandwidth, and
quantifies the estimation error with four bootstrap schemes: naive score
resampling, maximum entropy resampling of the score series, and residual
schemes built on a first-order autoregressive operator or a functional
kernel regression. A Monte Carlo driver scores the schemes' error
intervals against known processes.
"""

from ftsboot.bootstrap import (
    BootstrapEnsemble,
    BootstrapMethod,
    Far1Fit,
    bootstrap_errors,
    bootstrap_lrcov_ensemble,
    error_ci,
    far1_fit,
    far1_residuals,
    far_bootstrap,
    fkr_bandwidth,
    fkr_bootstrap,
    fkr_predict,
    generate_ensemble,
    iid_bootstrap,
    me_score_bootstrap,
    surface_ci,
)
from ftsboot.core import (
    CovSurface,
    FunctionalSample,
    Grid,
    autocov,
    center,
    hs_norm,
    l2_inner,
    sample_mean,
)
from ftsboot.fpca import EigenDecomp, eigendecompose, project_scores, reconstruct
from ftsboot.io import (
    IngestSpec,
    ingest_series,
    read_long_series,
    read_sample,
    read_surface,
    write_sample,
    write_surface,
)
from ftsboot.lrcov import (
    LrcovConfig,
    PluginBandwidth,
    WeightKernel,
    bartlett_weight,
    flat_top_weight,
    lrcov_estimate,
    plugin_bandwidth,
)
from ftsboot.meboot import (
    MebootSpec,
    me_intermediate_points,
    me_interval_means,
    meboot_ensemble,
    meboot_replicate,
)
from ftsboot.sim import (
    DgpSpec,
    ExperimentConfig,
    ScoreCell,
    ScoreReport,
    brownian_path,
    gen_dgp,
    interval_score,
    run_experiment,
    theoretical_lrcov,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapEnsemble",
    "BootstrapMethod",
    "CovSurface",
    "DgpSpec",
    "EigenDecomp",
    "ExperimentConfig",
    "Far1Fit",
    "FunctionalSample",
    "Grid",
    "IngestSpec",
    "LrcovConfig",
    "MebootSpec",
    "PluginBandwidth",
    "ScoreCell",
    "ScoreReport",
    "WeightKernel",
    "autocov",
    "bartlett_weight",
    "bootstrap_errors",
    "bootstrap_lrcov_ensemble",
    "brownian_path",
    "center",
    "eigendecompose",
    "error_ci",
    "far1_fit",
    "far1_residuals",
    "far_bootstrap",
    "fkr_bandwidth",
    "fkr_bootstrap",
    "fkr_predict",
    "flat_top_weight",
    "gen_dgp",
    "generate_ensemble",
    "hs_norm",
    "iid_bootstrap",
    "ingest_series",
    "interval_score",
    "l2_inner",
    "lrcov_estimate",
    "me_intermediate_points",
    "me_interval_means",
    "me_score_bootstrap",
    "meboot_ensemble",
    "meboot_replicate",
    "plugin_bandwidth",
    "project_scores",
    "read_long_series",
    "read_sample",
    "read_surface",
    "reconstruct",
    "run_experiment",
    "sample_mean",
    "surface_ci",
    "theoretical_lrcov",
    "write_sample",
    "write_surface",
    "__version__",
]
