"""Command-line entry point.

Exit codes: 0 success, 1 data error (bad input, failed verification),
2 configuration error.  ``VORTEX_TDA_LOG_LEVEL`` sets log verbosity.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import date
from pathlib import Path

import numpy as np

from . import synth
from .errors import ConfigError, DataError
from .ingest import (
    CADENCES,
    aggregate_daily,
    calendar_grid,
    find_gaps,
    parse_timestamp,
    read_series,
    slice_range,
    write_gap_report,
    write_series,
)
from .pipeline import (
    NORM_KINDS,
    THRESHOLD_KINDS,
    NormSeries,
    PipelineConfig,
    correlate,
    emit_outputs,
    run_analysis,
    verify_window,
    window_average,
)
from .plot import svg_line_plot

log = logging.getLogger("vortex_tda")

PIPELINE_FLAGS = ("m", "tau", "window", "step", "zscore", "max_dim", "r_max", "norm", "p", "k_max",
                  "grid", "threshold_kind", "threshold", "strict", "verify", "verify_samples")


def _r_max(text: str):
    if text == "enclosing":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'enclosing' or a number") from None


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps unset flags out of the namespace so the config file can fill them.
    S = argparse.SUPPRESS
    g = p.add_argument_group("pipeline")
    g.add_argument("--config", type=Path, help="JSON config file; flags override it")
    g.add_argument("--m", type=int, default=S, help="number of delays (default 7)")
    g.add_argument("--tau", type=int, default=S, help="delay in samples (default 1)")
    g.add_argument("--window", type=int, default=S, help="samples per window (default 30)")
    g.add_argument("--step", type=int, default=S, help="samples between windows (default 1)")
    g.add_argument("--zscore", action="store_true", default=S, help="z-score each window")
    g.add_argument("--max-dim", dest="max_dim", type=int, default=S)
    g.add_argument("--r-max", dest="r_max", type=_r_max, default=S, help="'enclosing' or a number")
    g.add_argument("--norm", choices=NORM_KINDS, default=S)
    g.add_argument("--p", type=float, default=S, help="norm exponent (default 2)")
    g.add_argument("--k-max", dest="k_max", type=int, default=S, help="landscape levels (default 5)")
    g.add_argument("--grid", type=int, default=S, help="landscape grid nodes (default 512)")
    g.add_argument("--threshold-kind", dest="threshold_kind", choices=THRESHOLD_KINDS, default=S)
    g.add_argument("--threshold", type=float, default=S,
                   help="feature threshold: fraction of max persistence, or absolute value")
    g.add_argument("--lenient", dest="strict", action="store_false", default=S,
                   help="keep windows containing incomplete days")
    g.add_argument("--verify", action="store_true", default=S, help="cross-check sample windows")
    g.add_argument("--verify-samples", dest="verify_samples", type=int, default=S)


def pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        data = data.get("config", data)
        emb = data.pop("embedding", {}) if isinstance(data.get("embedding"), dict) else {}
        data = {**emb, **data}
    for key in PIPELINE_FLAGS:
        if hasattr(args, key):
            data[key] = getattr(args, key)
    return PipelineConfig.from_dict(data)


def _date(text: str) -> date:
    return parse_timestamp(text).date()


def cmd_ingest(args) -> int:
    series = read_series(args.input, args.cadence)
    if args.cadence == "hourly" and not args.keep_hourly:
        series = aggregate_daily(series)
    if args.start or args.end:
        start = parse_timestamp(args.start) if args.start else series.samples[0].timestamp
        end = parse_timestamp(args.end) if args.end else series.samples[-1].timestamp + series.step
        series = slice_range(series, start, end)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_series(series, fh)
    gaps = find_gaps(series)
    if args.gaps:
        with open(args.gaps, "w", encoding="utf-8", newline="\n") as fh:
            write_gap_report(series, fh)
    print(f"wrote {len(series)} {series.cadence} samples to {args.out} "
          f"({len(gaps)} gaps, {len(series.flagged)} incomplete days)")
    return 0


def _synth_params(args) -> dict:
    kind = args.kind
    if kind == "lorenz63":
        params = {"length": args.length, "dt": args.dt, "sample_every": args.sample_every}
        if args.seed is not None:
            params["seed"] = args.seed
        return params
    if kind == "modulated_sine":
        return {"length": args.length, "period": args.period}
    if kind == "tone_switch":
        return {"length": args.length}
    params = {"length": args.length, "period": args.period, "amplitude": args.amplitude,
              "phase": args.phase}
    if kind == "noisy_sine":
        params.update(noise_sd=args.noise_sd, seed=args.seed or 0)
    return params


def cmd_synth(args) -> int:
    series = synth.synth_signal(args.kind, start=args.start, **_synth_params(args))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        write_series(series, fh)
    print(f"wrote {len(series)} samples of {args.kind} to {args.out}")
    return 0


def cmd_analyze(args) -> int:
    cfg = pipeline_config(args)
    series = read_series(args.input, "daily")
    result = run_analysis(series, cfg, jobs=args.jobs)
    manifest = emit_outputs(result, args.out)
    print(f"{len(result.norm_series)} windows analysed, {len(result.skipped)} skipped; "
          f"{len(manifest['files'])} files written to {args.out} (config {cfg.fingerprint})")
    if result.verification is not None:
        v = result.verification
        print(f"verification: {v.passed}/{v.checked} windows passed")
        for msg in v.failures:
            print(f"  {msg}")
        if v.failed:
            return 1
    return 0


def cmd_correlate(args) -> int:
    norms = NormSeries.from_csv(Path(args.norms).read_text())
    other = read_series(args.series, args.cadence)
    if other.cadence == "hourly":
        other = aggregate_daily(other)
    if args.align_window:
        other = window_average(other, args.align_window)
    r, n = correlate(norms, other)
    print(json.dumps({"pearson_r": r, "n_overlap": n}))
    return 0


def cmd_verify(args) -> int:
    cfg = pipeline_config(args)
    _, values, _ = calendar_grid(read_series(args.input, "daily"))
    w = cfg.embedding.window
    complete = [s for s in range(len(values) - w + 1) if not np.isnan(values[s:s + w]).any()]
    if not complete:
        raise DataError(f"no gap-free window of {w} days in {args.input}")
    count = min(args.samples, len(complete))
    starts = sorted({complete[round(i * (len(complete) - 1) / max(count - 1, 1))] for i in range(count)})
    failed = 0
    for s in starts:
        problems = verify_window(values[s:s + w], cfg)
        if problems:
            failed += 1
            for msg in problems:
                print(f"window {s}: {msg}")
    print(f"verified {len(starts)} windows: {len(starts) - failed} passed, {failed} failed")
    return 1 if failed else 0


def cmd_plot(args) -> int:
    norms = NormSeries.from_csv(Path(args.norms).read_text())
    values = [getattr(r, args.column) for r in norms.records]
    Path(args.out).write_text(svg_line_plot(norms.dates, values, args.title, args.column))
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vortex-tda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate, aggregate to daily and slice a CSV series")
    p.add_argument("--input", required=True)
    p.add_argument("--cadence", choices=sorted(CADENCES), default="hourly")
    p.add_argument("--keep-hourly", action="store_true", help="skip the daily aggregation")
    p.add_argument("--start", help="keep samples at or after this instant")
    p.add_argument("--end", help="keep samples before this instant")
    p.add_argument("--out", required=True)
    p.add_argument("--gaps", help="write a gap report CSV here")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic daily series")
    p.add_argument("--kind", choices=synth.KINDS, required=True)
    p.add_argument("--length", type=int, default=120)
    p.add_argument("--period", type=float, default=20.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--noise-sd", dest="noise_sd", type=float, default=0.1)
    p.add_argument("--seed", type=int)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--sample-every", dest="sample_every", type=int, default=1)
    p.add_argument("--start", type=_date, default=synth.DEFAULT_START)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", help="run the sliding-window persistence pipeline")
    p.add_argument("--input", required=True, help="daily series CSV")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("correlate", help="Pearson r between a norm series and another series")
    p.add_argument("--norms", required=True, help="norms.csv from analyze")
    p.add_argument("--series", required=True, help="series CSV (e.g. temperature)")
    p.add_argument("--cadence", choices=sorted(CADENCES), default="daily")
    p.add_argument("--align-window", dest="align_window", type=int, default=0,
                   help="average the series over this many days, dated by the first day")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("verify", help="cross-check sample windows against the brute-force oracle")
    p.add_argument("--input", required=True)
    p.add_argument("--samples", type=int, default=10)
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="SVG line plot of a norm series")
    p.add_argument("--norms", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--column", choices=("norm", "feature_count", "max_persistence"), default="norm")
    p.add_argument("--title", default="persistence norm")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("VORTEX_TDA_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
