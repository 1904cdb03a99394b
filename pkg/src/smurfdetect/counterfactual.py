"""Polynomial counterfactual fitted outside the manipulation window, and the zeta statistic.

The fit is ordinary least squares of per-bin fractions on a polynomial in the
bin midpoints. Numerically it is carried out in a Legendre basis on midpoints
mapped affinely onto [-1, 1] and solved through a QR factorisation; the fitted
values are the same as those of the raw monomial regression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from .errors import NumericalError, WindowError
from .histogram import BinnedHistogram, round_half_away

BASIS = "legendre-affine[-1,1]"
RANK_TOL = 1e-12


@dataclass(frozen=True)
class ManipulationWindow:
    """Bins ``l .. u-1`` are excluded from the fit; ``l .. -1`` sit below the threshold."""

    l: int
    u: int

    def __post_init__(self):
        if not (self.l < 0 < self.u):
            raise WindowError(f"window needs l < 0 < u, got l={self.l}, u={self.u}")

    def check(self, hist: BinnedHistogram) -> None:
        if self.l < hist.n_min or self.u > hist.n_max - 1:
            raise WindowError(
                f"window (l={self.l}, u={self.u}) outside histogram bins "
                f"{hist.n_min}..{hist.n_max - 1} (u must leave a bin above it)"
            )

    def inside(self, hist: BinnedHistogram) -> np.ndarray:
        idx = hist.indices
        return (idx >= self.l) & (idx < self.u)

    def signs(self, hist: BinnedHistogram) -> np.ndarray:
        """+1 on below-threshold window bins, -1 on above-threshold ones, 0 elsewhere."""
        idx = hist.indices
        s = np.zeros(hist.n_bins)
        s[(idx >= self.l) & (idx < 0)] = 1.0
        s[(idx >= 0) & (idx < self.u)] = -1.0
        return s


@dataclass(frozen=True, eq=False)
class CounterfactualFit:
    degree: int
    coefficients: np.ndarray
    fitted_fractions: np.ndarray
    fit_mask: np.ndarray
    domain: tuple[float, float]
    basis: str = BASIS

    @property
    def exact_interpolation(self) -> bool:
        """True when the degree uses every fitted bin (zero residual degrees of freedom)."""
        return int(self.fit_mask.sum()) == self.degree + 1

    def evaluate(self, x) -> np.ndarray:
        return legendre.legval(_to_unit(np.asarray(x, dtype=float), self.domain), self.coefficients)


def _to_unit(x, domain):
    a, b = domain
    if b == a:
        return np.zeros_like(x)
    return (2.0 * x - (a + b)) / (b - a)


def default_degree(hist: BinnedHistogram, window: ManipulationWindow | None = None) -> int:
    """Half the bin count, rounded half away from zero; capped by the fitted-bin count."""
    p = round_half_away(hist.n_bins / 2)
    if window is not None:
        n_fit = hist.n_bins - int(window.inside(hist).sum())
        p = min(p, n_fit - 1)
    return max(p, 0)


class _Design:
    """QR factorisation of the fitted-bin design, reusable across refits on the same bins."""

    def __init__(self, hist: BinnedHistogram, window: ManipulationWindow, degree: int):
        if degree < 0:
            raise WindowError(f"degree must be non-negative, got {degree}")
        window.check(hist)
        self.mask = ~window.inside(hist)
        n_fit = int(self.mask.sum())
        if n_fit < degree + 1:
            raise WindowError(
                f"{n_fit} bins outside the window cannot support a degree-{degree} fit"
            )
        mids = hist.midpoints
        self.domain = (float(mids[0]), float(mids[-1]))
        self.degree = degree
        self.v_all = legendre.legvander(_to_unit(mids, self.domain), degree)
        self.q, self.r = np.linalg.qr(self.v_all[self.mask])
        diag = np.abs(np.diag(self.r))
        if diag.min() <= RANK_TOL * diag.max():
            raise NumericalError("polynomial design matrix is numerically rank deficient")

    def coefficients(self, y: np.ndarray) -> np.ndarray:
        # y may be (bins,) or (bins, replicates)
        return np.linalg.solve(self.r, self.q.T @ y[self.mask])

    def hat(self) -> np.ndarray:
        """Matrix mapping all-bin fractions to all-bin fitted values."""
        h_fit = self.v_all @ np.linalg.solve(self.r, self.q.T)
        h = np.zeros((self.v_all.shape[0], self.v_all.shape[0]))
        h[:, self.mask] = h_fit
        return h


def fit_counterfactual(
    hist: BinnedHistogram, window: ManipulationWindow, degree: int
) -> CounterfactualFit:
    design = _Design(hist, window, degree)
    coef = design.coefficients(hist.fractions)
    return CounterfactualFit(
        degree=degree,
        coefficients=coef,
        fitted_fractions=design.v_all @ coef,
        fit_mask=design.mask,
        domain=design.domain,
    )


def zeta(hist: BinnedHistogram, fit: CounterfactualFit, window: ManipulationWindow) -> float:
    """Below-threshold excess plus above-threshold deficit, relative to the counterfactual."""
    window.check(hist)
    if fit.fitted_fractions.shape != (hist.n_bins,):
        raise WindowError("fit does not match histogram bin layout")
    resid = hist.fractions - fit.fitted_fractions
    return float(np.dot(window.signs(hist), resid))


def zeta_weights(hist: BinnedHistogram, window: ManipulationWindow, degree: int) -> np.ndarray:
    """Vector ``c`` with ``zeta == c @ fractions`` for any fractions on these bins.

    The least-squares fit is linear in the fractions, so refitting and
    recomputing zeta on new counts over the same bins reduces to a dot product.
    """
    design = _Design(hist, window, degree)
    s = window.signs(hist)
    return s - design.hat().T @ s
