"""Figures written next to the analysis and study tables.

Artists carry SVG ids (``bar-<i>``, ``excess-<i>``, ``fitted``,
``counterfactual``, ``threshold``) so saved files can be checked structurally.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import Analysis  # noqa: E402

BAR_COLOR = "tab:blue"
FIT_COLOR = "tab:orange"
CF_COLOR = "tab:red"
THRESHOLD_COLOR = "tab:purple"

STYLE = {
    "figure.figsize": (7.0, 4.0),
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "smurfdetect",
    "svg.fonttype": "none",
}


def _threshold_line(ax):
    ax.axvline(0.0, color=THRESHOLD_COLOR, linestyle="--", linewidth=1.2,
               label="alert threshold", gid="threshold")


def histogram_figure(analysis: Analysis):
    """Observed fractions as bars; counterfactual estimates as circles (fitted) and squares (window)."""
    h, fit = analysis.hist, analysis.fit
    mids, w = h.midpoints, h.bin_width
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        bars = ax.bar(mids, h.fractions, width=w, color=BAR_COLOR, alpha=0.6,
                      edgecolor="white", label="observed fraction")
        for i, bar in zip(h.indices, bars):
            bar.set_gid(f"bar-{i}")
        m = fit.fit_mask
        ax.plot(mids[m], fit.fitted_fractions[m], "o", color=FIT_COLOR,
                label="fitted", gid="fitted")
        ax.plot(mids[~m], fit.fitted_fractions[~m], "s", color=CF_COLOR,
                label="counterfactual", gid="counterfactual")
        _threshold_line(ax)
        ax.set_xlabel("log amount relative to threshold")
        ax.set_ylabel("fraction of transactions")
        est = analysis.estimate
        ax.set_title(f"l={analysis.window.l}, u={analysis.window.u}, p={fit.degree}: "
                     f"zeta={100 * est.zeta_hat:.2f}% [{100 * est.lower_cl:.2f}%]")
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def excess_figure(analysis: Analysis):
    """Per-bin excess ``observed - counterfactual``; darker shading means more excess."""
    h, fit = analysis.hist, analysis.fit
    excess = h.fractions - fit.fitted_fractions
    scale = np.max(np.abs(excess)) or 1.0
    cmap = plt.get_cmap("Blues")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(7.0, 2.6))
        bars = ax.bar(h.midpoints, excess, width=h.bin_width, edgecolor="white",
                      color=[cmap(0.2 + 0.8 * max(e, 0.0) / scale) for e in excess])
        for i, bar in zip(h.indices, bars):
            bar.set_gid(f"excess-{i}")
        ax.axhline(0.0, color="grey", linewidth=0.8)
        inside = analysis.window.inside(h)
        lo, hi = h.edges[:-1][inside].min(), h.edges[1:][inside].max()
        ax.axvspan(lo, hi, color="grey", alpha=0.1, gid="window")
        _threshold_line(ax)
        ax.set_xlabel("log amount relative to threshold")
        ax.set_ylabel("excess fraction")
        fig.tight_layout()
    return fig


def detection_figure(summary_rows):
    """Detection rate per analysis window, one group of bars per (type, r)."""
    groups = sorted({(r.type, r.r) for r in summary_rows})
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        us = sorted({r.u for r in summary_rows})
        width = 0.8 / max(len(us), 1)
        for j, u in enumerate(us):
            xs, ys = [], []
            for g, (typ, r) in enumerate(groups):
                row = [s for s in summary_rows if (s.type, s.r, s.u) == (typ, r, u)]
                if row:
                    xs.append(g + j * width)
                    ys.append(row[0].detection_rate)
            bars = ax.bar(xs, ys, width=width, label=f"u={u}")
            for x, bar in zip(xs, bars):
                bar.set_gid(f"rate-u{u}-{x:.3f}")
        ax.set_xticks([g + 0.4 - width / 2 for g in range(len(groups))])
        ax.set_xticklabels([f"{t}\nr={100 * r:g}%" for t, r in groups])
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("detection rate (lower limit > 0)")
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def save_svg(fig, path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
