"""Detect structuring of transactions just below an alert threshold."""

__version__ = "0.1.0"

from .analysis import Analysis, analyze, analyze_sample
from .bootstrap import SmurfingEstimate, bootstrap_zeta, percentile
from .counterfactual import (
    CounterfactualFit, ManipulationWindow, default_degree, fit_counterfactual, zeta,
)
from .histogram import BinnedHistogram, build_histogram, doane_bin_count, locate_bin
from .kstest import KsResult, kolmogorov_sf, ks_two_sample
from .simulate import SimulationConfig, inject_smurfing, preset, simulate, simulate_baseline
from .transform import TransactionSample, TransformedSample, trim_and_transform, z_transform

__all__ = [
    "Analysis", "analyze", "analyze_sample", "SmurfingEstimate", "bootstrap_zeta",
    "percentile", "CounterfactualFit", "ManipulationWindow", "default_degree",
    "fit_counterfactual", "zeta", "BinnedHistogram", "build_histogram",
    "doane_bin_count", "locate_bin", "KsResult", "kolmogorov_sf", "ks_two_sample",
    "SimulationConfig", "inject_smurfing", "preset", "simulate", "simulate_baseline",
    "TransactionSample", "TransformedSample", "trim_and_transform", "z_transform",
]
