"""Loading, validating and aggregating scalar time series from CSV.

The on-disk layout is a two-column CSV with header ``timestamp,value``,
ISO-8601 UTC timestamps and decimal values.  Everything here is pure:
functions take a :class:`TimeSeries` and return a new one.
"""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    DuplicateTimestampError,
    EmptySliceError,
    MalformedRowError,
)

CADENCES = {"hourly": timedelta(hours=1), "daily": timedelta(days=1)}
HOURS_PER_DAY = 24
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class Sample(NamedTuple):
    timestamp: datetime
    value: float


class Gap(NamedTuple):
    """Half-open run of missing samples: ``start`` is the first missing
    instant, ``end`` the next instant that is present."""

    start: datetime
    end: datetime


def _as_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    return _as_utc(ts).replace(microsecond=0)


def format_timestamp(ts: datetime) -> str:
    return _as_utc(ts).strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class TimeSeries:
    """Ordered, finite, timestamped scalar samples at a declared cadence.

    ``flagged`` holds timestamps whose value was built from incomplete data
    (e.g. a day averaged from fewer than 24 hours).
    """

    samples: tuple[Sample, ...]
    cadence: str = "daily"
    label: str = ""
    flagged: frozenset[datetime] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.cadence not in CADENCES:
            raise ConfigError(f"unknown cadence {self.cadence!r}; expected one of {sorted(CADENCES)}")
        if not self.samples:
            raise DataError("time series must contain at least one sample")
        step = CADENCES[self.cadence]
        prev = None
        for s in self.samples:
            if not math.isfinite(s.value):
                raise DataError(f"non-finite value at {format_timestamp(s.timestamp)}")
            if prev is not None:
                delta = s.timestamp - prev
                if delta <= timedelta(0):
                    raise DataError(f"timestamps not strictly increasing at {format_timestamp(s.timestamp)}")
                if delta % step:
                    raise DataError(
                        f"gap before {format_timestamp(s.timestamp)} is not a multiple of the {self.cadence} cadence"
                    )
            prev = s.timestamp

    @classmethod
    def from_values(cls, values: Iterable[float], start: datetime | date, cadence: str = "daily",
                    label: str = "") -> TimeSeries:
        if not isinstance(start, datetime):
            start = datetime(start.year, start.month, start.day)
        start = _as_utc(start)
        step = CADENCES[cadence]
        samples = tuple(Sample(start + i * step, float(v)) for i, v in enumerate(values))
        return cls(samples, cadence, label)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def timestamps(self) -> list[datetime]:
        return [s.timestamp for s in self.samples]

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples], dtype=float)

    @property
    def step(self) -> timedelta:
        return CADENCES[self.cadence]


def parse_series(stream: TextIO | str, cadence: str = "daily", label: str = "") -> TimeSeries:
    """Parse ``timestamp,value`` CSV text into a validated series.

    Rows may arrive in any order; they are sorted by timestamp.  Errors name
    the offending line.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["timestamp", "value"]:
        raise MalformedRowError(1, f"expected header 'timestamp,value', got {header!r}")

    rows: list[tuple[int, Sample]] = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise MalformedRowError(line, f"expected 2 fields, got {len(row)}")
        try:
            ts = parse_timestamp(row[0])
        except ValueError as exc:
            raise MalformedRowError(line, f"bad timestamp {row[0]!r}") from exc
        try:
            value = float(row[1])
        except ValueError as exc:
            raise MalformedRowError(line, f"bad value {row[1]!r}") from exc
        if not math.isfinite(value):
            raise MalformedRowError(line, f"non-finite value {row[1]!r}")
        rows.append((line, Sample(ts, value)))

    if not rows:
        raise DataError("CSV has a header but no data rows")

    rows.sort(key=lambda r: r[1].timestamp)
    for (_, a), (line, b) in zip(rows, rows[1:]):
        if a.timestamp == b.timestamp:
            raise DuplicateTimestampError(f"line {line}: duplicate timestamp {format_timestamp(b.timestamp)}")
    return TimeSeries(tuple(s for _, s in rows), cadence, label)


def read_series(path: str | Path, cadence: str = "daily", label: str | None = None) -> TimeSeries:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        return parse_series(fh, cadence, path.stem if label is None else label)


def write_series(series: TimeSeries, stream: TextIO) -> None:
    stream.write("timestamp,value\n")
    for s in series.samples:
        stream.write(f"{format_timestamp(s.timestamp)},{s.value:.9g}\n")


def series_to_csv(series: TimeSeries) -> str:
    buf = io.StringIO()
    write_series(series, buf)
    return buf.getvalue()


def _mean(values: list[float]) -> float:
    # Shifted mean: exact for constant input, clipped to the data range.
    base = values[0]
    m = base + math.fsum(v - base for v in values) / len(values)
    return min(max(m, min(values)), max(values))


def aggregate_daily(hourly: TimeSeries) -> TimeSeries:
    """Average an hourly series into one sample per UTC calendar day.

    Days with fewer than 24 hourly samples still produce a mean of what is
    there, but are listed in ``flagged``.  Days with no samples at all are
    simply absent and show up in :func:`find_gaps`.
    """
    if hourly.cadence != "hourly":
        raise ConfigError(f"aggregate_daily needs an hourly series, got {hourly.cadence}")
    by_day: dict[date, list[float]] = defaultdict(list)
    for s in hourly.samples:
        by_day[s.timestamp.date()].append(s.value)

    samples = []
    flagged = set()
    for day in sorted(by_day):
        vals = by_day[day]
        ts = datetime(day.year, day.month, day.day, tzinfo=timezone.utc)
        samples.append(Sample(ts, _mean(vals)))
        if len(vals) < HOURS_PER_DAY:
            flagged.add(ts)
    return TimeSeries(tuple(samples), "daily", hourly.label, frozenset(flagged))


def slice_range(series: TimeSeries, start: datetime | date, end: datetime | date) -> TimeSeries:
    """Samples with ``start <= timestamp < end``."""
    if not isinstance(start, datetime):
        start = datetime(start.year, start.month, start.day)
    if not isinstance(end, datetime):
        end = datetime(end.year, end.month, end.day)
    start, end = _as_utc(start), _as_utc(end)
    if not start < end:
        raise ConfigError("slice_range needs start < end")
    kept = tuple(s for s in series.samples if start <= s.timestamp < end)
    if not kept:
        raise EmptySliceError(f"no samples in [{format_timestamp(start)}, {format_timestamp(end)})")
    kept_ts = {s.timestamp for s in kept}
    return TimeSeries(kept, series.cadence, series.label, frozenset(series.flagged & kept_ts))


def find_gaps(series: TimeSeries) -> list[Gap]:
    step = series.step
    gaps = []
    for a, b in zip(series.samples, series.samples[1:]):
        if b.timestamp - a.timestamp > step:
            gaps.append(Gap(a.timestamp + step, b.timestamp))
    return gaps


def write_gap_report(series: TimeSeries, stream: TextIO) -> None:
    stream.write("gap_start,gap_end,missing_count\n")
    for g in find_gaps(series):
        missing = (g.end - g.start) // series.step
        stream.write(f"{format_timestamp(g.start)},{format_timestamp(g.end)},{missing}\n")


def calendar_grid(series: TimeSeries) -> tuple[list[datetime], np.ndarray, np.ndarray]:
    """Lay the series onto a complete grid at its cadence.

    Returns ``(timestamps, values, flagged)``; missing slots hold NaN.
    """
    step = series.step
    first = series.samples[0].timestamp
    n = (series.samples[-1].timestamp - first) // step + 1
    values = np.full(n, np.nan)
    flagged = np.zeros(n, dtype=bool)
    for s in series.samples:
        i = (s.timestamp - first) // step
        values[i] = s.value
        flagged[i] = s.timestamp in series.flagged
    stamps = [first + i * step for i in range(n)]
    return stamps, values, flagged
