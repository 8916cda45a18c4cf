"""Clustering by the local minima of the gamma-loss."""

from ._core import (
    InvalidInput,
    NumericalError,
    aic_penalty,
    bhi,
    ch_index,
    check_bimodal,
    cluster,
    detect_centers,
    find_local_min,
    gamma_by_range,
    kmeans,
    loss_mu,
    oracle_mode_count,
    sample_mixture,
    select_gamma_aic,
)

__all__ = [
    "InvalidInput",
    "NumericalError",
    "aic_penalty",
    "bhi",
    "ch_index",
    "check_bimodal",
    "cluster",
    "detect_centers",
    "find_local_min",
    "gamma_by_range",
    "kmeans",
    "loss_mu",
    "oracle_mode_count",
    "sample_mixture",
    "select_gamma_aic",
]
__version__ = "0.1.0"
