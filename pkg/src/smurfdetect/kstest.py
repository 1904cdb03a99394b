"""Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError

SERIES_TOL = 1e-12
# below this the alternating series converges slowly; use the theta-function form
_SMALL_X = 1.0


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n1: int
    n2: int

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "n1": self.n1, "n2": self.n2}


def kolmogorov_sf(x: float) -> float:
    """P(K > x) for the limiting Kolmogorov distribution, clamped to [0, 1].

    For x >= 1 this is ``2 * sum_k (-1)^(k-1) exp(-2 k^2 x^2)`` truncated once a
    term drops below 1e-12. Smaller x use the equivalent Jacobi-theta form of
    the CDF, which converges fast where the first series does not.
    """
    if x <= 0:
        return 1.0
    if x < _SMALL_X:
        c = math.pi ** 2 / (8.0 * x * x)
        cdf, k = 0.0, 1
        while True:
            term = math.exp(-(2 * k - 1) ** 2 * c)
            cdf += term
            if term < SERIES_TOL * 1e-4:
                break
            k += 1
        cdf *= math.sqrt(2.0 * math.pi) / x
        return min(1.0, max(0.0, 1.0 - cdf))
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < SERIES_TOL:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(a, b) -> float:
    """Largest gap between the two empirical CDFs, evaluated at every observed value."""
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    if xa.size == 0 or xb.size == 0:
        raise InsufficientDataError("both samples must be non-empty")
    support = np.unique(np.concatenate([xa, xb]))
    # right-continuous EDFs: values at each point; left limits equal the previous point's value
    fa = np.searchsorted(xa, support, side="right") / xa.size
    fb = np.searchsorted(xb, support, side="right") / xb.size
    return float(np.max(np.abs(fa - fb)))


def ks_two_sample(a, b) -> KsResult:
    d = ks_statistic(a, b)
    n1, n2 = len(a), len(b)
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return KsResult(statistic=d, p_value=kolmogorov_sf(d * en), n1=n1, n2=n2)
