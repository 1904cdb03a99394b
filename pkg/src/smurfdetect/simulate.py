"""Synthetic transaction samples in log space, with optional smurfing injection.

A selected transaction of log size ``m`` in ``[0, b_u)`` is replaced by
``floor(exp(m - s))`` copies of a smurf transaction of log size ``s`` drawn
uniformly on ``(b_l, 0)``; the remainder that does not fit is not laundered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counterfactual import ManipulationWindow
from .errors import InsufficientDataError, PreconditionError
from .histogram import BinnedHistogram, build_histogram
from .transform import TransformedSample, trim_z

# spawn keys are (domain, stream); bootstrap replicates use 1-tuples, so no overlap.
# Separate streams keep the baseline draw independent of r.
_SIM_DOMAIN = 0x5111
_BASELINE_STREAM = 0
_INJECTION_STREAM = 1

INJECTION_WINDOW = ManipulationWindow(l=-1, u=2)


@dataclass(frozen=True)
class SimulationConfig:
    n_draws: int
    mean: float
    stddev: float
    smurf_fraction: float = 0.0
    window: ManipulationWindow = INJECTION_WINDOW
    seed: int = 0

    def __post_init__(self):
        if self.n_draws < 10:
            raise PreconditionError(f"n_draws must be at least 10, got {self.n_draws}")
        if not (self.stddev > 0 and math.isfinite(self.stddev)):
            raise PreconditionError(f"stddev must be positive, got {self.stddev}")
        if not math.isfinite(self.mean):
            raise PreconditionError("mean must be finite")
        if not 0.0 <= self.smurf_fraction <= 1.0:
            raise PreconditionError(f"smurf fraction must lie in [0, 1], got {self.smurf_fraction}")
        if self.seed < 0:
            raise PreconditionError("seed must be non-negative")


PRESETS = {
    "A": dict(n_draws=50_000, mean=-2.5, stddev=1.8),
    "B": dict(n_draws=250_000, mean=-2.1, stddev=2.1),
}


def preset_key(name: str) -> str:
    """Canonical preset key; accepts ``"A"``, ``"typeA"``, ``"type_b"`` etc."""
    key = name.strip().lower().replace("_", "").replace("type", "").upper()
    if key not in PRESETS:
        raise PreconditionError(f"unknown preset {name!r}; expected typeA or typeB")
    return key


def preset(name: str, **overrides) -> SimulationConfig:
    return SimulationConfig(**{**PRESETS[preset_key(name)], **overrides})


def _rng(seed: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(seed, spawn_key=(_SIM_DOMAIN, stream))
    return np.random.Generator(np.random.Philox(seq))


def simulate_baseline(config: SimulationConfig) -> TransformedSample:
    draws = _rng(config.seed, _BASELINE_STREAM).normal(config.mean, config.stddev, config.n_draws)
    return trim_z(draws)


def smurf_count(gap: float) -> int:
    """Number of smurf transactions one split yields, ``floor(exp(m - s))``."""
    return int(math.floor(math.exp(gap)))


def smurfed_total(r: float, n: int) -> int:
    """``floor(r * n)``, robust to representation error in ``r``."""
    return int(math.floor(round(r * n, 9)))


@dataclass(frozen=True, eq=False)
class SmurfInjectionReport:
    removed_indices: np.ndarray
    originals: np.ndarray  # m_j
    smurf_sizes: np.ndarray  # s_j
    splits: np.ndarray  # d_j

    @property
    def removed_count(self) -> int:
        return int(self.removed_indices.size)

    @property
    def added_count(self) -> int:
        return int(self.splits.sum())


def inject_smurfing(
    sample: TransformedSample,
    hist: BinnedHistogram,
    r: float,
    seed: int,
    window: ManipulationWindow = INJECTION_WINDOW,
) -> tuple[TransformedSample, SmurfInjectionReport]:
    """Split ``floor(r * n)`` transactions from ``[0, b_u)`` into smurfs in ``(b_l, 0)``.

    ``hist`` supplies the edges ``b_l`` and ``b_u``; it should be the
    histogram of the baseline sample the result will be re-analysed against.
    """
    if not 0.0 <= r <= 1.0:
        raise PreconditionError(f"smurf fraction must lie in [0, 1], got {r}")
    window.check(hist)
    b_l = window.l * hist.bin_width
    b_u = window.u * hist.bin_width
    values = sample.values
    k = smurfed_total(r, sample.n)
    eligible = np.flatnonzero((values >= 0) & (values < b_u))
    if eligible.size < k:
        raise InsufficientDataError(
            f"only {eligible.size} transactions in [0, b_u) but {k} must be smurfed"
        )
    rng = _rng(seed, _INJECTION_STREAM)
    chosen = np.sort(rng.choice(eligible, size=k, replace=False)) if k else np.empty(0, dtype=np.int64)
    s = rng.uniform(b_l, 0.0, size=k)
    # open interval (b_l, 0): uniform() already excludes 0
    while np.any(s <= b_l):
        bad = s <= b_l
        s[bad] = rng.uniform(b_l, 0.0, size=int(bad.sum()))
    m = values[chosen]
    d = np.floor(np.exp(m - s)).astype(np.int64)
    kept = np.delete(values, chosen)
    contaminated = np.concatenate([kept, np.repeat(s, d)])
    report = SmurfInjectionReport(removed_indices=chosen, originals=m, smurf_sizes=s, splits=d)
    return TransformedSample(values=contaminated, trim_bounds=sample.trim_bounds), report


@dataclass(frozen=True, eq=False)
class SimulatedData:
    config: SimulationConfig
    baseline: TransformedSample
    hist: BinnedHistogram
    sample: TransformedSample
    injection: SmurfInjectionReport | None = field(default=None)


def simulate(config: SimulationConfig) -> SimulatedData:
    """Baseline draw, its histogram, and (if ``r > 0``) the contaminated sample."""
    baseline = simulate_baseline(config)
    hist = build_histogram(baseline.values)
    if config.smurf_fraction == 0:
        return SimulatedData(config, baseline, hist, baseline)
    sample, report = inject_smurfing(
        baseline, hist, config.smurf_fraction, config.seed, config.window
    )
    return SimulatedData(config, baseline, hist, sample, report)
