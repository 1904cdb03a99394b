"""Bootstrap lower confidence limit for zeta over fixed histogram bins.

Every replicate draws ``n`` observations with replacement from the trimmed
sample and re-bins them into the original edges. Replicate ``i`` uses its own
Philox stream keyed by ``SeedSequence(seed, spawn_key=(i,))``, so the output
depends only on ``(inputs, seed)`` and never on the number of workers.

Two resampling methods are offered. ``"resample"`` literally draws indices and
bins the drawn values. ``"multinomial"`` (the default) draws the per-bin counts
directly from Multinomial(n, observed bin shares), which is the exact
distribution of the binned resample and costs O(bins) instead of O(n).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .counterfactual import ManipulationWindow, fit_counterfactual, zeta, zeta_weights
from .errors import NumericalError, PreconditionError
from .histogram import BinnedHistogram, bin_positions, rebin, with_counts
from .transform import TransformedSample, quantile

DEFAULT_REPLICATES = 10_000
CONFIDENCE_QUANTILE = 0.05
MAX_FAILURE_RATE = 0.01
METHODS = ("multinomial", "resample")


def rng_description() -> str:
    return (
        f"numpy {np.__version__} Philox4x64-10, "
        "per-replicate SeedSequence(seed, spawn_key=(replicate,))"
    )


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(replicate,))))


def percentile(values: Sequence[float], q: float) -> float:
    """Type-7 percentile, the same rule used for the trimming quantiles."""
    return quantile(values, q)


@dataclass(frozen=True, eq=False)
class SmurfingEstimate:
    zeta_hat: float
    replicates: np.ndarray
    lower_cl: float
    replicate_count: int
    seed: int
    failures: int = 0
    method: str = "multinomial"
    rng: str = field(default_factory=rng_description)

    @property
    def detected(self) -> bool:
        return self.lower_cl > 0


def _draw_counts(base_counts, positions, seed, indices, method) -> np.ndarray:
    n = int(base_counts.sum())
    out = np.empty((len(indices), base_counts.size), dtype=np.int64)
    pvals = base_counts / n
    for row, i in enumerate(indices):
        rng = replicate_rng(seed, i)
        if method == "multinomial":
            out[row] = rng.multinomial(n, pvals)
        else:
            out[row] = np.bincount(positions[rng.integers(0, n, n)], minlength=base_counts.size)
    return out


def replicate_counts(
    sample: TransformedSample,
    hist: BinnedHistogram,
    replicate_count: int,
    seed: int,
    workers: int = 1,
    method: str = "multinomial",
) -> np.ndarray:
    """Per-replicate bin counts, shape ``(replicate_count, n_bins)``."""
    if method not in METHODS:
        raise PreconditionError(f"unknown resampling method {method!r}")
    if replicate_count < 1:
        raise PreconditionError("replicate_count must be positive")
    positions = bin_positions(hist, sample.values)
    base = np.bincount(positions, minlength=hist.n_bins)
    workers = max(1, int(workers))
    chunks = np.array_split(np.arange(replicate_count), workers)
    if workers == 1:
        return _draw_counts(base, positions, seed, chunks[0], method)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda c: _draw_counts(base, positions, seed, c, method), chunks)
        return np.vstack(list(parts))


def iter_replicate_histograms(
    sample: TransformedSample, hist: BinnedHistogram, replicate_count: int, seed: int,
    method: str = "multinomial",
) -> Iterator[BinnedHistogram]:
    """Replicate histograms sharing ``hist.edges`` (for audits and slow-path checks)."""
    for counts in replicate_counts(sample, hist, replicate_count, seed, method=method):
        yield with_counts(hist, counts)


def _summarise(zeta_hat, reps, replicate_count, seed, method) -> SmurfingEstimate:
    ok = np.isfinite(reps)
    failures = int(replicate_count - ok.sum())
    if failures > MAX_FAILURE_RATE * replicate_count:
        raise NumericalError(f"{failures} of {replicate_count} bootstrap replicates failed")
    return SmurfingEstimate(
        zeta_hat=zeta_hat,
        replicates=reps,
        lower_cl=percentile(reps[ok], CONFIDENCE_QUANTILE),
        replicate_count=replicate_count,
        seed=seed,
        failures=failures,
        method=method,
    )


def bootstrap_many(
    sample: TransformedSample,
    hist: BinnedHistogram,
    specs: Sequence[tuple[ManipulationWindow, int]],
    replicate_count: int = DEFAULT_REPLICATES,
    seed: int = 0,
    workers: int = 1,
    method: str = "multinomial",
) -> list[SmurfingEstimate]:
    """Bootstrap several (window, degree) specifications off one set of resamples."""
    if replicate_count < 100:
        raise PreconditionError(f"replicate_count must be at least 100, got {replicate_count}")
    observed = rebin(hist, sample.values)
    counts = replicate_counts(sample, hist, replicate_count, seed, workers, method)
    totals = counts.sum(axis=1)
    results = []
    for window, degree in specs:
        fit = fit_counterfactual(observed, window, degree)
        zeta_hat = zeta(observed, fit, window)
        weights = zeta_weights(hist, window, degree)
        reps = (counts @ weights) / totals
        results.append(_summarise(zeta_hat, reps, replicate_count, seed, method))
    return results


def bootstrap_zeta(
    sample: TransformedSample,
    hist: BinnedHistogram,
    window: ManipulationWindow,
    degree: int,
    replicate_count: int = DEFAULT_REPLICATES,
    seed: int = 0,
    workers: int = 1,
    method: str = "multinomial",
) -> SmurfingEstimate:
    return bootstrap_many(
        sample, hist, [(window, degree)], replicate_count, seed, workers, method
    )[0]


def lower_limit(replicates: Sequence[float]) -> float:
    return percentile(replicates, CONFIDENCE_QUANTILE)


def is_64bit_seed(seed) -> bool:
    return isinstance(seed, (int, np.integer)) and 0 <= int(seed) < 2**64
