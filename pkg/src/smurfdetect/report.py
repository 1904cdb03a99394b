"""Versioned JSON analysis report and the per-bin delimited tables written beside it."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .analysis import Analysis

SCHEMA_VERSION = "1.0"

_num = {"type": "number"}
_int = {"type": "integer"}
_nums = {"type": "array", "items": _num}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "tool_version", "rng", "input", "histogram", "fit",
                 "window", "zeta_hat", "bootstrap", "verdict"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "tool_version": {"type": "string"},
        "rng": {"type": "string"},
        "input": {
            "type": "object", "additionalProperties": False,
            "required": ["rows", "threshold", "trim_low", "trim_high", "n", "sha256"],
            "properties": {
                "rows": _int, "threshold": _num, "trim_low": _num, "trim_high": _num,
                "n": _int, "sha256": {"type": ["string", "null"]},
            },
        },
        "histogram": {
            "type": "object", "additionalProperties": False,
            "required": ["bin_width", "n_min", "n_max", "edges", "midpoints", "counts", "fractions"],
            "properties": {
                "bin_width": _num, "n_min": _int, "n_max": _int, "edges": _nums,
                "midpoints": _nums, "counts": {"type": "array", "items": _int},
                "fractions": _nums,
            },
        },
        "fit": {
            "type": "object", "additionalProperties": False,
            "required": ["degree", "basis", "domain", "coefficients", "fitted_fractions",
                         "fitted_bins", "exact_interpolation"],
            "properties": {
                "degree": _int, "basis": {"type": "string"},
                "domain": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                "coefficients": _nums, "fitted_fractions": _nums,
                "fitted_bins": {"type": "array", "items": {"type": "boolean"}},
                "exact_interpolation": {"type": "boolean"},
            },
        },
        "window": {
            "type": "object", "additionalProperties": False, "required": ["l", "u"],
            "properties": {"l": {"type": "integer", "maximum": -1},
                           "u": {"type": "integer", "minimum": 1}},
        },
        "zeta_hat": _num,
        "bootstrap": {
            "type": "object", "additionalProperties": False,
            "required": ["replicate_count", "seed", "lower_cl", "failures", "method"],
            "properties": {
                "replicate_count": _int, "seed": {"type": "integer", "minimum": 0},
                "lower_cl": _num, "failures": _int, "method": {"type": "string"},
            },
        },
        "verdict": {"enum": ["smurfing indicated", "no smurfing indicated"]},
    },
}


@dataclass(frozen=True)
class InputDigest:
    rows: int
    threshold: float
    trim_low: float
    trim_high: float
    n: int
    sha256: str | None = None


@dataclass(frozen=True)
class HistogramSummary:
    bin_width: float
    n_min: int
    n_max: int
    edges: list[float]
    midpoints: list[float]
    counts: list[int]
    fractions: list[float]


@dataclass(frozen=True)
class FitSummary:
    degree: int
    basis: str
    domain: list[float]
    coefficients: list[float]
    fitted_fractions: list[float]
    fitted_bins: list[bool]
    exact_interpolation: bool


@dataclass(frozen=True)
class WindowSummary:
    l: int
    u: int


@dataclass(frozen=True)
class BootstrapSummary:
    replicate_count: int
    seed: int
    lower_cl: float
    failures: int
    method: str


@dataclass(frozen=True)
class AnalysisReport:
    tool_version: str
    rng: str
    input: InputDigest
    histogram: HistogramSummary
    fit: FitSummary
    window: WindowSummary
    zeta_hat: float
    bootstrap: BootstrapSummary
    verdict: str
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        jsonschema.validate(d, REPORT_SCHEMA)
        return cls(
            tool_version=d["tool_version"],
            rng=d["rng"],
            input=InputDigest(**d["input"]),
            histogram=HistogramSummary(**d["histogram"]),
            fit=FitSummary(**d["fit"]),
            window=WindowSummary(**d["window"]),
            zeta_hat=d["zeta_hat"],
            bootstrap=BootstrapSummary(**d["bootstrap"]),
            verdict=d["verdict"],
            schema_version=d["schema_version"],
        )


def _floats(a) -> list[float]:
    return [float(x) for x in np.asarray(a, dtype=float)]


def build_report(analysis: Analysis, sha256: str | None = None) -> AnalysisReport:
    h, fit, est = analysis.hist, analysis.fit, analysis.estimate
    return AnalysisReport(
        tool_version=__version__,
        rng=est.rng,
        input=InputDigest(
            rows=analysis.raw_count, threshold=analysis.threshold,
            trim_low=float(analysis.sample.trim_bounds[0]),
            trim_high=float(analysis.sample.trim_bounds[1]),
            n=analysis.sample.n, sha256=sha256,
        ),
        histogram=HistogramSummary(
            bin_width=float(h.bin_width), n_min=int(h.n_min), n_max=int(h.n_max),
            edges=_floats(h.edges), midpoints=_floats(h.midpoints),
            counts=[int(c) for c in h.counts], fractions=_floats(h.fractions),
        ),
        fit=FitSummary(
            degree=fit.degree, basis=fit.basis, domain=_floats(fit.domain),
            coefficients=_floats(fit.coefficients),
            fitted_fractions=_floats(fit.fitted_fractions),
            fitted_bins=[bool(b) for b in fit.fit_mask],
            exact_interpolation=fit.exact_interpolation,
        ),
        window=WindowSummary(l=analysis.window.l, u=analysis.window.u),
        zeta_hat=float(est.zeta_hat),
        bootstrap=BootstrapSummary(
            replicate_count=est.replicate_count, seed=int(est.seed),
            lower_cl=float(est.lower_cl), failures=est.failures, method=est.method,
        ),
        verdict=analysis.verdict,
    )


def serialize(report: AnalysisReport) -> str:
    d = report.to_dict()
    jsonschema.validate(d, REPORT_SCHEMA)
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def parse(text: str) -> AnalysisReport:
    return AnalysisReport.from_dict(json.loads(text))


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


BIN_COLUMNS = ["bin", "left", "right", "midpoint", "count", "fraction", "fitted",
               "in_window", "excess"]


def write_bins_csv(analysis: Analysis, path) -> Path:
    """Per-bin table: observed and counterfactual fractions and their difference."""
    h, fit = analysis.hist, analysis.fit
    inside = analysis.window.inside(h)
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BIN_COLUMNS)
        for k, i in enumerate(h.indices):
            obs, cf = h.fractions[k], fit.fitted_fractions[k]
            w.writerow([int(i), repr(float(h.edges[k])), repr(float(h.edges[k + 1])),
                        repr(float(h.midpoints[k])), int(h.counts[k]), repr(float(obs)),
                        repr(float(cf)), int(inside[k]), repr(float(obs - cf))])
    return path


def write_replicates_csv(analysis: Analysis, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write("replicate,zeta\n")
        for i, z in enumerate(analysis.estimate.replicates):
            fh.write(f"{i},{float(z)!r}\n")
    return path
