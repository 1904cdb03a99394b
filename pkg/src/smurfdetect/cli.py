"""Command-line front end.

Exit codes: 0 success, 2 bad input file, 3 precondition violated, 4 numerical failure.
Options resolve as command-line flag, then ``--config`` JSON file, then default.
The default output directory is taken from ``SMURFDETECT_OUTPUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import analyze
from .bootstrap import DEFAULT_REPLICATES, is_64bit_seed
from .csvio import read_amounts, write_amounts
from .errors import InputFileError, NumericalError, PreconditionError, SmurfDetectError
from .kstest import ks_two_sample
from .plotting import detection_figure, excess_figure, histogram_figure, save_svg
from .report import build_report, file_sha256, serialize, write_bins_csv, write_replicates_csv
from .simulate import SimulationConfig, preset, simulate
from .study import DEFAULT_GRIDS, grids_from_config, run_study, write_study

log = logging.getLogger("smurfdetect")

OUTPUT_ENV = "SMURFDETECT_OUTPUT_DIR"
EXIT_INPUT, EXIT_PRECONDITION, EXIT_NUMERICAL = 2, 3, 4

ANALYZE_DEFAULTS = {
    "l": -1, "u": None, "degree": None, "replicates": DEFAULT_REPLICATES,
    "seed": 0, "workers": 1, "threshold": None,
}


def _default_out() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "smurfdetect-out"))


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFileError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputFileError(f"config {path} must hold a JSON object")
    return cfg


def _resolve(args, cfg: dict, defaults: dict) -> dict:
    out = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else cfg.get(key, default)
    return out


def _check_seed(seed) -> int:
    if not is_64bit_seed(seed):
        raise PreconditionError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    opts = _resolve(args, cfg, ANALYZE_DEFAULTS)
    if opts["threshold"] is None:
        raise PreconditionError("--threshold is required")
    if opts["u"] is None:
        raise PreconditionError("--u is required")
    out_dir = Path(args.out_dir or cfg.get("out_dir") or _default_out())
    amounts = read_amounts(args.csv)
    result = analyze(
        amounts, float(opts["threshold"]), l=int(opts["l"]), u=int(opts["u"]),
        degree=None if opts["degree"] is None else int(opts["degree"]),
        replicate_count=int(opts["replicates"]), seed=_check_seed(opts["seed"]),
        workers=int(opts["workers"]),
    )
    report = build_report(result, sha256=file_sha256(args.csv))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(serialize(report))
    write_bins_csv(result, out_dir / "bins.csv")
    write_replicates_csv(result, out_dir / "replicates.csv")
    save_svg(histogram_figure(result), out_dir / "histogram.svg")
    save_svg(excess_figure(result), out_dir / "excess.svg")
    if result.fit.exact_interpolation:
        log.warning("degree %d interpolates the fitted bins exactly", result.fit.degree)
    est = result.estimate
    print(f"zeta = {100 * est.zeta_hat:.3f}%  lower 5% limit = {100 * est.lower_cl:.3f}%  "
          f"-> {result.verdict}")
    print(f"wrote {out_dir}/report.json")
    return 0


def cmd_simulate(args) -> int:
    if args.preset:
        cfg = preset(args.preset, smurf_fraction=args.r, seed=_check_seed(args.seed))
    else:
        if None in (args.n_draws, args.mean, args.stddev):
            raise PreconditionError("give --preset or all of --n-draws, --mean, --stddev")
        cfg = SimulationConfig(n_draws=args.n_draws, mean=args.mean, stddev=args.stddev,
                               smurf_fraction=args.r, seed=_check_seed(args.seed))
    if not args.threshold > 1:
        raise PreconditionError("--threshold must exceed 1")
    data = simulate(cfg)
    amounts = np.exp(data.sample.values + math.log(args.threshold))
    if amounts.min() <= 1:
        raise PreconditionError(
            "simulated amounts fall to 1 or below; choose a larger --threshold"
        )
    write_amounts(args.out, amounts)
    inj = data.injection
    print(json.dumps({
        "rows": int(amounts.size),
        "threshold": args.threshold,
        "removed": inj.removed_count if inj else 0,
        "added": inj.added_count if inj else 0,
        "out": str(args.out),
    }))
    return 0


def cmd_kstest(args) -> int:
    result = ks_two_sample(read_amounts(args.csv_a), read_amounts(args.csv_b))
    print(json.dumps(result.as_dict()))
    return 0


def cmd_study(args) -> int:
    cfg = _load_config(args.config)
    grids = grids_from_config(cfg) if cfg else list(DEFAULT_GRIDS)
    if args.seeds is not None or args.replicates is not None:
        grids = [
            replace(g,
                    seeds=tuple(range(args.seeds)) if args.seeds is not None else g.seeds,
                    replicate_count=args.replicates or g.replicate_count)
            for g in grids
        ]
    out_dir = Path(args.out_dir or cfg.get("out_dir") or _default_out())
    result = run_study(grids, workers=args.workers)
    write_study(result, out_dir)
    rows = result.summary()
    save_svg(detection_figure(rows), out_dir / "detection.svg")
    print(f"{'type':6} {'r':>6} {'u':>2} {'zeta%':>7} {'lcl%':>7} {'rate':>5} {'removed;added':>15}")
    for r in rows:
        print(f"{r.type:6} {r.r:6.3%} {r.u:2d} {r.mean_zeta_pct:7.2f} {r.mean_lower_cl_pct:7.2f} "
              f"{r.detection_rate:5.2f} {r.mean_removed:7.0f};{r.mean_added:<7.0f}")
    print(f"wrote {out_dir}/summary.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smurfdetect", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="test a CSV of amounts for structuring below a threshold")
    a.add_argument("csv", help="CSV with one amount per row (header optional)")
    a.add_argument("--threshold", type=float, help="alert threshold in the amounts' currency")
    a.add_argument("--l", type=int, help="lower window bin index (default -1)")
    a.add_argument("--u", type=int, help="upper window bin index")
    a.add_argument("--degree", type=int, help="polynomial degree (default: half the bin count)")
    a.add_argument("--replicates", type=int, help=f"bootstrap replicates (default {DEFAULT_REPLICATES})")
    a.add_argument("--seed", type=int, help="bootstrap seed (default 0)")
    a.add_argument("--workers", type=int, help="bootstrap threads; never changes results")
    a.add_argument("--config", help="JSON file with any of the options above")
    a.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or ./smurfdetect-out)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="write a synthetic transaction CSV")
    s.add_argument("--preset", help="typeA or typeB")
    s.add_argument("--n-draws", type=int)
    s.add_argument("--mean", type=float, help="mean in log units relative to the threshold")
    s.add_argument("--stddev", type=float)
    s.add_argument("--r", type=float, default=0.0, help="fraction of transactions to smurf")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threshold", type=float, default=100_000.0,
                   help="fake alert threshold used to convert back to amounts")
    s.add_argument("--out", required=True, help="output CSV path")
    s.set_defaults(func=cmd_simulate)

    k = sub.add_parser("kstest", help="two-sample Kolmogorov-Smirnov test on two CSV files")
    k.add_argument("csv_a")
    k.add_argument("csv_b")
    k.set_defaults(func=cmd_kstest)

    st = sub.add_parser("study", help="simulation power study (defaults to the type A/B grid)")
    st.add_argument("--config", help="JSON grid config: one grid object or {\"grids\": [...]}")
    st.add_argument("--seeds", type=int, help="number of seeds per cell (0..N-1)")
    st.add_argument("--replicates", type=int, help="bootstrap replicates per run")
    st.add_argument("--workers", type=int, default=1)
    st.add_argument("--out-dir")
    st.set_defaults(func=cmd_study)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InputFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SmurfDetectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
