"""Closed-form vacant-set quantities: exact finite-n moments and their n -> infinity limits."""

from .limits import (
    NuEstimate,
    covariance_limit,
    mean_limit,
    nu_d,
    nu_high_d,
    nu_high_d_estimate,
    nu_low_d,
    origin_green,
    scaling_factor,
    time_from_density,
    variance_scale,
)
from .moments import exact_covariance, exact_mean_range, exact_mean_vacant, exact_variance, mean_expansion
from .params import AsymptoticParams, CovarianceQuery, subset_label
from .theta import theta, theta_row

__all__ = [
    "AsymptoticParams",
    "CovarianceQuery",
    "subset_label",
    "theta",
    "theta_row",
    "exact_mean_vacant",
    "exact_mean_range",
    "mean_expansion",
    "exact_variance",
    "exact_covariance",
    "NuEstimate",
    "nu_high_d",
    "nu_high_d_estimate",
    "nu_low_d",
    "nu_d",
    "covariance_limit",
    "mean_limit",
    "origin_green",
    "scaling_factor",
    "variance_scale",
    "time_from_density",
]
