"""Fixed-width log-space histogram whose edges are aligned on the threshold.

Bin ``i`` is the interval ``(i*w, (i+1)*w]`` for ``i = n_min .. n_max - 1``, so
zero (the alert threshold in z units) is always an edge. The lowest edge is
closed so the sample minimum is never dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateSampleError, PreconditionError


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def doane_bin_count(values) -> int:
    """Number of bins from Doane's rule, skewness taken with divisor n."""
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 4:
        raise PreconditionError(f"Doane's rule needs at least 4 values, got {n}")
    sigma = x.std()
    if sigma == 0 or not np.isfinite(sigma):
        raise DegenerateSampleError("standard deviation is zero; skewness undefined")
    g1 = np.mean(((x - x.mean()) / sigma) ** 3)
    sigma_g1 = math.sqrt(6.0 * (n - 2) / ((n + 1) * (n + 3)))
    k = 1.0 + math.log2(n) + math.log2(1.0 + abs(g1) / sigma_g1)
    return round_half_away(k)


@dataclass(frozen=True, eq=False)
class BinnedHistogram:
    bin_width: float
    n_min: int
    n_max: int
    edges: np.ndarray
    counts: np.ndarray
    total_n: int

    @property
    def n_bins(self) -> int:
        return self.n_max - self.n_min

    @property
    def midpoints(self) -> np.ndarray:
        return self.edges[:-1] + self.bin_width / 2.0

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / self.total_n

    @property
    def indices(self) -> np.ndarray:
        """Bin indices ``n_min .. n_max - 1`` (bin ``i`` starts at edge ``i*w``)."""
        return np.arange(self.n_min, self.n_max)

    def position(self, i: int) -> int:
        """Array position of bin index ``i``."""
        return i - self.n_min


def bin_positions(hist: BinnedHistogram, values) -> np.ndarray:
    """Array positions (0-based) of the bins owning each value."""
    z = np.asarray(values, dtype=float)
    edges = hist.edges
    if z.size and (z.min() < edges[0] or z.max() > edges[-1]):
        raise PreconditionError(
            f"values outside histogram range [{edges[0]}, {edges[-1]}]"
        )
    # first edge >= z, so edges[pos] < z <= edges[pos + 1]
    pos = np.searchsorted(edges, z, side="left") - 1
    pos[pos < 0] = 0
    return pos


def locate_bin(hist: BinnedHistogram, z: float) -> int:
    """Bin index ``i`` with ``z`` in ``(b_i, b_{i+1}]``; the lowest edge maps to ``n_min``."""
    return int(bin_positions(hist, [z])[0]) + hist.n_min


def build_histogram(values, bins: int | None = None) -> BinnedHistogram:
    """Bin ``values`` with width ``(max - min) / (k - 1)``; ``k`` from Doane's rule unless given."""
    z = np.asarray(values, dtype=float)
    if z.size == 0:
        raise PreconditionError("cannot build a histogram of no values")
    lo, hi = float(z.min()), float(z.max())
    if hi == lo:
        raise DegenerateSampleError("all values identical; bin width undefined")
    k = doane_bin_count(z) if bins is None else int(bins)
    if k <= 1:
        raise PreconditionError(f"bin count must exceed 1, got {k}")
    width = (hi - lo) / (k - 1)
    n_min = math.floor(lo / width)
    n_max = math.ceil(hi / width)
    # guard against floor/ceil landing one step inside the range after rounding
    if n_min * width > lo:
        n_min -= 1
    if n_max * width < hi:
        n_max += 1
    edges = np.arange(n_min, n_max + 1) * width
    return _with_counts(width, n_min, n_max, edges, z)


def _with_counts(width, n_min, n_max, edges, z) -> BinnedHistogram:
    hist = BinnedHistogram(
        bin_width=width, n_min=n_min, n_max=n_max, edges=edges,
        counts=np.zeros(n_max - n_min, dtype=np.int64), total_n=int(z.size),
    )
    counts = np.bincount(bin_positions(hist, z), minlength=hist.n_bins)
    return replace(hist, counts=counts)


def rebin(hist: BinnedHistogram, values) -> BinnedHistogram:
    """Histogram of ``values`` on the fixed edges of ``hist``."""
    z = np.asarray(values, dtype=float)
    if z.size == 0:
        raise PreconditionError("cannot rebin an empty sample")
    return _with_counts(hist.bin_width, hist.n_min, hist.n_max, hist.edges, z)


def with_counts(hist: BinnedHistogram, counts) -> BinnedHistogram:
    """Same edges, new per-bin counts (used for bootstrap replicates)."""
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (hist.n_bins,):
        raise PreconditionError("count vector does not match the bin layout")
    return replace(hist, counts=counts, total_n=int(counts.sum()))
