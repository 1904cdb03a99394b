"""Threshold-centred log transform and quantile trimming of transaction amounts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError

TRIM_LOW = 0.001
TRIM_HIGH = 0.999
MIN_OBSERVATIONS = 10


@dataclass(frozen=True)
class TransactionSample:
    """Raw positive amounts together with the alert threshold they are tested against."""

    amounts: np.ndarray
    threshold: float

    def __post_init__(self):
        amounts = np.asarray(self.amounts, dtype=float).ravel()
        if amounts.size == 0:
            raise InsufficientDataError("transaction sample is empty")
        if not np.all(np.isfinite(amounts)):
            raise DomainError("amounts must be finite")
        if not self.threshold > 1:
            raise DomainError(f"threshold must exceed 1, got {self.threshold!r}")
        bad = int(np.count_nonzero(amounts <= 1))
        if bad:
            raise DomainError(f"{bad} amount(s) are <= 1; the log transform requires t > 1")
        object.__setattr__(self, "amounts", amounts)
        object.__setattr__(self, "threshold", float(self.threshold))


@dataclass(frozen=True)
class TransformedSample:
    """Trimmed sample in threshold-centred log units.

    ``trim_bounds`` holds the applied quantile cutoffs in amount units. For
    simulated samples, which have no currency threshold, amounts are taken
    relative to a unit threshold, i.e. the bounds are ``exp`` of the z cutoffs.
    """

    values: np.ndarray
    trim_bounds: tuple[float, float]

    @property
    def n(self) -> int:
        return int(self.values.size)


def z_transform(t, threshold):
    """Return ``ln(t) - ln(threshold)``; works on scalars and arrays."""
    if not threshold > 1:
        raise DomainError(f"threshold must exceed 1, got {threshold!r}")
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 1):
        raise DomainError("transaction amounts must exceed 1")
    if arr.ndim == 0:
        t = float(arr)
        # exact zero at the threshold
        return 0.0 if t == threshold else math.log(t) - math.log(threshold)
    return np.log(arr) - math.log(threshold)


def quantile(values, q: float) -> float:
    """Linear interpolation between order statistics (Hyndman-Fan type 7)."""
    xs = np.sort(np.asarray(values, dtype=float))
    if xs.size == 0:
        raise InsufficientDataError("quantile of an empty sample")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    h = q * (xs.size - 1)
    lo = math.floor(h)
    hi = min(lo + 1, xs.size - 1)
    frac = h - lo
    if frac == 0.0:
        return float(xs[lo])
    return float(xs[lo] + frac * (xs[hi] - xs[lo]))


def trim_mask(values, low: float = TRIM_LOW, high: float = TRIM_HIGH):
    """Boolean mask keeping values inside the [low, high] quantiles, plus the cutoffs.

    Values equal to a cutoff are kept.
    """
    arr = np.asarray(values, dtype=float)
    lo_cut = quantile(arr, low)
    hi_cut = quantile(arr, high)
    return (arr >= lo_cut) & (arr <= hi_cut), (lo_cut, hi_cut)


def trim_and_transform(sample: TransactionSample) -> TransformedSample:
    if sample.amounts.size < MIN_OBSERVATIONS:
        raise InsufficientDataError(
            f"need at least {MIN_OBSERVATIONS} observations, got {sample.amounts.size}"
        )
    keep, bounds = trim_mask(sample.amounts)
    kept = sample.amounts[keep]
    if kept.size < MIN_OBSERVATIONS:
        raise InsufficientDataError(f"only {kept.size} observations survive trimming")
    return TransformedSample(values=z_transform(kept, sample.threshold), trim_bounds=bounds)


def trim_z(values: Sequence[float]) -> TransformedSample:
    """Trim values that are already in log space (simulated data)."""
    arr = np.asarray(values, dtype=float)
    if arr.size < MIN_OBSERVATIONS:
        raise InsufficientDataError(
            f"need at least {MIN_OBSERVATIONS} observations, got {arr.size}"
        )
    keep, (lo, hi) = trim_mask(arr)
    return TransformedSample(values=arr[keep], trim_bounds=(math.exp(lo), math.exp(hi)))
