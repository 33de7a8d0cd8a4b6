"""Subquadratic edit distance approximation: metric estimation, window DP and a MapReduce simulation."""

from .approx import ApproxConfig, ApproxResult, BootstrapConfig, bounded_edit_approx, e_e, edit_approx, edit_approx_boot
from .mapreduce import ClusterConfig, mr_edit, mr_edit_large_delta, mr_edit_small_delta
from .metric import estimate_metric, estimate_with_threshold, fast_estimate_metric, fast_estimate_with_threshold
from .oracle import MeteredMetric, QueryMeter
from .strings import apply_script, edit_bounded, edit_exact, validate_script

__all__ = [
    "ApproxConfig",
    "ApproxResult",
    "BootstrapConfig",
    "ClusterConfig",
    "MeteredMetric",
    "QueryMeter",
    "apply_script",
    "bounded_edit_approx",
    "e_e",
    "edit_approx",
    "edit_approx_boot",
    "edit_bounded",
    "edit_exact",
    "estimate_metric",
    "estimate_with_threshold",
    "fast_estimate_metric",
    "fast_estimate_with_threshold",
    "mr_edit",
    "mr_edit_large_delta",
    "mr_edit_small_delta",
    "validate_script",
]
