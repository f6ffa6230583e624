"""Window-by-window analysis of a daily series and output emission."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

from . import validation
from .embed import EmbeddingConfig, schedule_windows, sliding_window_embed, zscore_window
from .errors import AllWindowsSkippedError, ConfigError, DataError, NormalizationError
from .ingest import Sample, TimeSeries, calendar_grid
from .landscape import (
    build_landscape,
    count_features,
    default_grid,
    landscape_norm,
    max_persistence,
    total_persistence,
)
from .persistence import PersistenceDiagram, boundary_matrix, extract_diagram, reduce
from .plot import svg_line_plot
from .rips import build_vr_filtration, pairwise_distances

log = logging.getLogger(__name__)

NORM_KINDS = ("landscape", "total")
THRESHOLD_KINDS = ("relative", "absolute")


@dataclass(frozen=True)
class PipelineConfig:
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    max_dim: int = 2
    r_max: str | float = "enclosing"
    norm: str = "landscape"
    p: float = 2.0
    k_max: int = 5
    grid: int = 512
    threshold_kind: str = "relative"
    threshold: float = 0.25
    strict: bool = True
    verify: bool = False
    verify_samples: int = 10

    def __post_init__(self):
        if self.max_dim < 2:
            raise ConfigError("max_dim must be at least 2 to witness H1 deaths")
        if self.r_max != "enclosing":
            if isinstance(self.r_max, str) or not self.r_max > 0:
                raise ConfigError(f"r_max must be 'enclosing' or a positive number, got {self.r_max!r}")
        if self.norm not in NORM_KINDS:
            raise ConfigError(f"norm must be one of {NORM_KINDS}, got {self.norm!r}")
        if self.norm == "landscape" and not self.p >= 1:
            raise ConfigError("landscape norm needs p >= 1")
        if self.norm == "total" and not self.p > 0:
            raise ConfigError("total persistence needs p > 0")
        if self.k_max < 1 or self.grid < 2:
            raise ConfigError("k_max must be >= 1 and grid >= 2")
        if self.threshold_kind not in THRESHOLD_KINDS:
            raise ConfigError(f"threshold_kind must be one of {THRESHOLD_KINDS}")
        if self.threshold < 0:
            raise ConfigError("threshold must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> PipelineConfig:
        """Build from a nested dict (as written to config.json) or a flat one
        whose embedding keys sit at the top level."""
        data = dict(data)
        emb = dict(data.pop("embedding", {}))
        for key in ("m", "tau", "window", "step", "zscore"):
            if key in data:
                emb[key] = data.pop(key)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            return cls(embedding=EmbeddingConfig(**emb), **data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class NormRecord:
    date: date
    norm: float
    feature_count: int
    max_persistence: float


@dataclass(frozen=True)
class NormSeries:
    records: tuple[NormRecord, ...]
    fingerprint: str = ""

    def __len__(self) -> int:
        return len(self.records)

    @property
    def dates(self) -> list[date]:
        return [r.date for r in self.records]

    @property
    def norms(self) -> np.ndarray:
        return np.array([r.norm for r in self.records], dtype=float)

    def to_csv(self) -> str:
        lines = ["date,norm,feature_count,max_persistence"]
        for r in self.records:
            lines.append(f"{r.date.isoformat()},{r.norm!r},{r.feature_count},{r.max_persistence!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, fingerprint: str = "") -> NormSeries:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["date", "norm", "feature_count", "max_persistence"]:
            raise DataError(f"not a norm-series CSV (header {reader.fieldnames})")
        records = []
        for row in reader:
            try:
                records.append(NormRecord(date.fromisoformat(row["date"]), float(row["norm"]),
                                          int(row["feature_count"]), float(row["max_persistence"])))
            except (TypeError, ValueError) as exc:
                raise DataError(f"line {reader.line_num}: {exc}") from None
        return cls(tuple(records), fingerprint)


@dataclass(frozen=True)
class SkippedWindow:
    index: int
    date: date
    reason: str


@dataclass(frozen=True)
class VerificationReport:
    checked: int
    passed: int
    failures: tuple[str, ...] = ()

    @property
    def failed(self) -> int:
        return self.checked - self.passed


@dataclass(frozen=True)
class AnalysisResult:
    norm_series: NormSeries
    diagrams: tuple[tuple[date, PersistenceDiagram], ...]
    skipped: tuple[SkippedWindow, ...]
    config: PipelineConfig
    verification: VerificationReport | None = None

    @property
    def scheduled(self) -> int:
        return len(self.norm_series) + len(self.skipped)


@dataclass(frozen=True)
class WindowResult:
    diagram: PersistenceDiagram
    norm: float
    feature_count: int
    max_persistence: float


def window_filtration(values, cfg: PipelineConfig):
    cloud = sliding_window_embed(values, cfg.embedding)
    dm = pairwise_distances(cloud)
    r_max = None if cfg.r_max == "enclosing" else float(cfg.r_max)
    return build_vr_filtration(dm, cfg.max_dim, r_max)


def analyze_window(values, cfg: PipelineConfig) -> WindowResult:
    """Embed, filter, reduce, and summarise one window's H1."""
    f = window_filtration(values, cfg)
    diagram = extract_diagram(reduce(boundary_matrix(f)), f, 1)
    finite = diagram.finite()
    mp = max_persistence(finite)
    if cfg.norm == "landscape":
        L = build_landscape(finite, cfg.k_max, default_grid(finite, cfg.grid))
        norm = landscape_norm(L, cfg.p)
    else:
        norm = total_persistence(finite, cfg.p)
    cut = cfg.threshold * mp if cfg.threshold_kind == "relative" else cfg.threshold
    return WindowResult(diagram, norm, count_features(finite, cut), mp)


def verify_window(values, cfg: PipelineConfig, n_radii: int = 5) -> list[str]:
    """Cross-check one window against the brute-force oracle; returns problems found."""
    f = window_filtration(values, cfg)
    bm = boundary_matrix(f)
    problems = []
    if not validation.chain_complex_check(bm):
        problems.append("boundary of boundary is not zero")
    fast = reduce(bm)
    slow = validation.naive_reduce(bm)
    if set(fast.pairs) != set(slow.pairs) or fast.essential != slow.essential:
        problems.append("optimised and naive pairings differ")
    radii = np.linspace(0.0, f.r_max, n_radii + 2)[1:-1] if f.r_max > 0 else [0.0]
    for p in range(f.max_dim):
        diagram = extract_diagram(fast, f, p)
        for r in radii:
            expected = validation.betti_at(f, r, p).betti
            got = validation.intervals_alive_at(diagram, r)
            if expected != got:
                problems.append(f"H{p} at r={r:.6g}: diagram gives {got}, rank formula gives {expected}")
    return problems


def _window_task(args):
    values, cfg = args
    return analyze_window(values, cfg)


def run_analysis(series: TimeSeries, cfg: PipelineConfig | None = None, jobs: int = 1) -> AnalysisResult:
    """Run the full sliding-window pipeline over a daily series.

    Windows touching a missing day are skipped; in strict mode so are windows
    touching a day flagged as incomplete.  ``jobs > 1`` fans windows out to
    worker processes; results are merged back in window order.
    """
    cfg = cfg or PipelineConfig()
    if series.cadence != "daily":
        raise ConfigError("run_analysis expects a daily series; aggregate hourly data first")
    stamps, values, flagged = calendar_grid(series)
    emb = cfg.embedding
    if len(values) < emb.window:
        raise DataError(f"series covers {len(values)} days, fewer than one window ({emb.window})")

    starts = schedule_windows(len(values), emb)
    todo: list[tuple[int, date, np.ndarray]] = []
    skipped = []
    for k, s in enumerate(starts):
        day = stamps[s].date()
        chunk = values[s:s + emb.window]
        if np.isnan(chunk).any():
            skipped.append(SkippedWindow(k, day, "gap"))
            continue
        if cfg.strict and flagged[s:s + emb.window].any():
            skipped.append(SkippedWindow(k, day, "incomplete-day"))
            continue
        if emb.zscore:
            try:
                chunk = zscore_window(chunk)
            except NormalizationError:
                skipped.append(SkippedWindow(k, day, "zero-variance"))
                continue
        todo.append((k, day, chunk))

    if not todo:
        raise AllWindowsSkippedError(f"all {len(starts)} windows were skipped")
    log.info("analysing %d windows (%d skipped)", len(todo), len(skipped))

    tasks = [(chunk, cfg) for _, _, chunk in todo]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_window_task, tasks, chunksize=16))
    else:
        results = [_window_task(t) for t in tasks]

    records = tuple(
        NormRecord(day, res.norm, res.feature_count, res.max_persistence)
        for (_, day, _), res in zip(todo, results)
    )
    diagrams = tuple((day, res.diagram) for (_, day, _), res in zip(todo, results))

    report = None
    if cfg.verify:
        picks = sorted({round(i) for i in np.linspace(0, len(todo) - 1, min(cfg.verify_samples, len(todo)))})
        failures = []
        passed = 0
        for i in picks:
            _, day, chunk = todo[i]
            problems = verify_window(chunk, cfg)
            passed += not problems
            failures.extend(f"{day.isoformat()}: {msg}" for msg in problems)
        report = VerificationReport(len(picks), passed, tuple(failures))
        log.info("verification: %d/%d windows passed", report.passed, report.checked)

    return AnalysisResult(
        NormSeries(records, cfg.fingerprint),
        diagrams,
        tuple(skipped),
        cfg,
        report,
    )


def window_average(series: TimeSeries, window: int) -> TimeSeries:
    """Boxcar mean of ``window`` consecutive days, dated by the first day.

    This puts a daily series (temperature, an envelope) on the same date
    convention as a norm series built with the same window length.  Windows
    that touch a missing day are dropped.
    """
    if window < 1:
        raise ConfigError("window must be positive")
    stamps, values, _ = calendar_grid(series)
    out = []
    for s in range(len(values) - window + 1):
        chunk = values[s:s + window]
        if not np.isnan(chunk).any():
            out.append((stamps[s], float(chunk.mean())))
    if not out:
        raise DataError(f"no complete {window}-day window in series")
    return TimeSeries(tuple(Sample(ts, v) for ts, v in out), "daily", series.label)


def correlate(a: NormSeries, b: TimeSeries) -> tuple[float, int]:
    """Pearson r between norms and a daily series over their shared dates."""
    other = {s.timestamp.date(): s.value for s in b.samples}
    xs, ys = [], []
    for rec in a.records:
        if rec.date in other:
            xs.append(rec.norm)
            ys.append(other[rec.date])
    n = len(xs)
    if n < 3:
        raise DataError(f"only {n} overlapping dates; need at least 3")
    x, y = np.array(xs), np.array(ys)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DataError("one of the series is constant over the overlap")
    r = float(np.corrcoef(x, y)[0, 1])
    return max(-1.0, min(1.0, r)), n


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def emit_outputs(result: AnalysisResult, out_dir: str | Path) -> dict:
    """Write norms, per-window diagrams, skips, config and a plot; return the manifest.

    The manifest (also written as ``manifest.json``) lists each file with its
    SHA-256 and is not itself listed.
    """
    out = Path(out_dir)
    written: list[Path] = []

    def write(rel: str, text: str) -> None:
        path = out / rel
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc.strerror or exc}") from exc
        written.append(path)

    ns = result.norm_series
    write("norms.csv", ns.to_csv())
    for day, diagram in result.diagrams:
        write(f"diagrams/{day.isoformat()}.json", diagram.to_json() + "\n")
    skipped = ["index,date,reason"] + [f"{s.index},{s.date.isoformat()},{s.reason}" for s in result.skipped]
    write("skipped.csv", "\n".join(skipped) + "\n")
    config = {"fingerprint": result.config.fingerprint, "config": result.config.to_dict()}
    if result.verification is not None:
        v = result.verification
        config["verification"] = {"checked": v.checked, "passed": v.passed, "failures": list(v.failures)}
    write("config.json", json.dumps(config, indent=2, sort_keys=True) + "\n")
    if len(ns):
        write("norms.svg", svg_line_plot(ns.dates, list(ns.norms), "persistence norm", "norm"))

    manifest = {
        "fingerprint": result.config.fingerprint,
        "files": [
            {"path": p.relative_to(out).as_posix(), "sha256": _sha256(p)}
            for p in sorted(written, key=lambda q: q.relative_to(out).as_posix())
        ],
    }
    write("manifest.json", json.dumps(manifest, indent=2) + "\n")
    written.pop()
    return manifest

