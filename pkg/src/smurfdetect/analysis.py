"""End-to-end analysis: trim, bin, fit the counterfactual, bootstrap zeta."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bootstrap import DEFAULT_REPLICATES, SmurfingEstimate, bootstrap_zeta
from .counterfactual import (
    CounterfactualFit, ManipulationWindow, default_degree, fit_counterfactual,
)
from .histogram import BinnedHistogram, build_histogram, rebin
from .transform import TransactionSample, TransformedSample, trim_and_transform


@dataclass(frozen=True, eq=False)
class Analysis:
    raw_count: int
    threshold: float
    sample: TransformedSample
    hist: BinnedHistogram
    window: ManipulationWindow
    fit: CounterfactualFit
    estimate: SmurfingEstimate

    @property
    def verdict(self) -> str:
        return "smurfing indicated" if self.estimate.detected else "no smurfing indicated"


def analyze_sample(
    sample: TransformedSample,
    hist: BinnedHistogram,
    window: ManipulationWindow,
    degree: int | None = None,
    replicate_count: int = DEFAULT_REPLICATES,
    seed: int = 0,
    workers: int = 1,
) -> tuple[BinnedHistogram, CounterfactualFit, SmurfingEstimate]:
    """Analyse ``sample`` on the fixed edges of ``hist`` (which may come from another sample)."""
    observed = rebin(hist, sample.values)
    if degree is None:
        degree = default_degree(observed, window)
    fit = fit_counterfactual(observed, window, degree)
    est = bootstrap_zeta(sample, observed, window, degree, replicate_count, seed, workers)
    return observed, fit, est


def analyze(
    amounts,
    threshold: float,
    l: int = -1,
    u: int = 2,
    degree: int | None = None,
    replicate_count: int = DEFAULT_REPLICATES,
    seed: int = 0,
    workers: int = 1,
) -> Analysis:
    """Run the full test on raw currency amounts against alert threshold ``threshold``."""
    raw = TransactionSample(np.asarray(amounts, dtype=float), threshold)
    sample = trim_and_transform(raw)
    hist = build_histogram(sample.values)
    window = ManipulationWindow(l, u)
    hist, fit, est = analyze_sample(sample, hist, window, degree, replicate_count, seed, workers)
    return Analysis(
        raw_count=int(raw.amounts.size), threshold=raw.threshold, sample=sample,
        hist=hist, window=window, fit=fit, estimate=est,
    )
