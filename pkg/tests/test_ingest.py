import io
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortex_tda.errors import (
    ConfigError,
    DataError,
    DuplicateTimestampError,
    EmptySliceError,
    MalformedRowError,
)
from vortex_tda.ingest import (
    Gap,
    TimeSeries,
    aggregate_daily,
    calendar_grid,
    find_gaps,
    parse_series,
    series_to_csv,
    slice_range,
    write_gap_report,
)

UTC = timezone.utc
T0 = datetime(2016, 1, 1, tzinfo=UTC)


def hourly_csv(values, start=T0):
    rows = [f"{(start + timedelta(hours=i)).strftime('%Y-%m-%dT%H:%M:%SZ')},{v}" for i, v in enumerate(values)]
    return "timestamp,value\n" + "\n".join(rows) + "\n"


def daily(values, start=T0):
    return TimeSeries.from_values(values, start, "daily")


def test_parse_single_row():
    s = parse_series("timestamp,value\n2016-02-01T00:00:00Z,38.2", "daily")
    assert len(s) == 1
    assert s.samples[0].value == 38.2
    assert s.samples[0].timestamp == datetime(2016, 2, 1, tzinfo=UTC)


def test_parse_duplicate_timestamp():
    text = "timestamp,value\n2016-02-01T00:00:00Z,1\n2016-02-01T00:00:00Z,2\n"
    with pytest.raises(DuplicateTimestampError):
        parse_series(text, "daily")


def test_parse_48_hourly_rows():
    s = parse_series(hourly_csv(range(48)), "hourly")
    assert len(s) == 48
    assert s.cadence == "hourly"


def test_parse_sorts_rows():
    text = "timestamp,value\n2016-01-02T00:00:00Z,2\n2016-01-01T00:00:00Z,1\n"
    s = parse_series(text, "daily")
    assert list(s.values) == [1.0, 2.0]


@pytest.mark.parametrize(
    "body, line",
    [
        ("2016-01-01T00:00:00Z,1\nnot-a-date,2\n", 3),
        ("2016-01-01T00:00:00Z,abc\n", 2),
        ("2016-01-01T00:00:00Z,1,2\n", 2),
        ("2016-01-01T00:00:00Z,nan\n", 2),
        ("2016-01-01T00:00:00Z,inf\n", 2),
    ],
)
def test_parse_malformed_reports_line(body, line):
    with pytest.raises(MalformedRowError) as exc:
        parse_series("timestamp,value\n" + body, "daily")
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_parse_errors():
    with pytest.raises(DataError):
        parse_series("timestamp,value\n", "daily")
    with pytest.raises(MalformedRowError):
        parse_series("time,val\n2016-01-01T00:00:00Z,1\n", "daily")
    with pytest.raises(DataError):
        # 36 h gap is not a whole number of days
        parse_series("timestamp,value\n2016-01-01T00:00:00Z,1\n2016-01-02T12:00:00Z,1\n", "daily")


def test_aggregate_constant_day():
    s = aggregate_daily(parse_series(hourly_csv([5.0] * 24), "hourly"))
    assert len(s) == 1 and s.values[0] == 5.0
    assert s.cadence == "daily"
    assert s.samples[0].timestamp == T0
    assert not s.flagged


def test_aggregate_ramp():
    s = aggregate_daily(parse_series(hourly_csv(range(24)), "hourly"))
    assert s.values[0] == 11.5


def test_aggregate_partial_days():
    start = T0 + timedelta(hours=12)  # 12 h on day 1, 12 h on day 2
    vals = np.random.default_rng(1).normal(size=24)
    s = aggregate_daily(parse_series(hourly_csv(vals, start), "hourly"))
    assert len(s) == 2
    assert s.values == pytest.approx([vals[:12].mean(), vals[12:].mean()], abs=1e-12)
    assert s.flagged == frozenset(s.timestamps)


def test_aggregate_needs_hourly():
    with pytest.raises(ConfigError):
        aggregate_daily(daily([1.0, 2.0]))


def test_aggregate_missing_day_becomes_gap():
    vals = list(range(24)) + list(range(24))
    hourly = parse_series(hourly_csv(vals[:24]) + hourly_csv(vals[24:], T0 + timedelta(days=2)).split("\n", 1)[1],
                          "hourly")
    s = aggregate_daily(hourly)
    assert len(s) == 2
    assert find_gaps(s) == [Gap(T0 + timedelta(days=1), T0 + timedelta(days=2))]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=24 * 4))
def test_aggregate_within_hourly_range(vals):
    s = aggregate_daily(parse_series(hourly_csv(vals), "hourly"))
    assert s.values.min() >= min(vals)
    assert s.values.max() <= max(vals)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=5))
def test_aggregate_repeated_hours_is_exact(day_values):
    hourly = [v for v in day_values for _ in range(24)]
    s = aggregate_daily(parse_series(hourly_csv(hourly), "hourly"))
    assert list(s.values) == [float(repr(v)) for v in day_values]


def test_slice_full_range_is_identity():
    s = daily(range(10))
    assert slice_range(s, T0, T0 + timedelta(days=10)) == s


def test_slice_empty_raises():
    s = daily(range(10))
    with pytest.raises(EmptySliceError):
        slice_range(s, T0 + timedelta(days=20), T0 + timedelta(days=30))
    with pytest.raises(ConfigError):
        slice_range(s, T0, T0)


@pytest.mark.parametrize("year, expected", [(2015, 365), (2016, 366), (2019, 365), (2020, 366)])
def test_slice_one_year_of_six(year, expected):
    s = TimeSeries.from_values(np.zeros(2192), datetime(2015, 1, 1), "daily")
    one = slice_range(s, datetime(year, 1, 1), datetime(year + 1, 1, 1))
    # oracle: count calendar days directly
    assert len(one) == (datetime(year + 1, 1, 1) - datetime(year, 1, 1)).days == expected


def test_find_gaps():
    assert find_gaps(daily(range(10))) == []
    stamps = [T0 + timedelta(days=d) for d in range(20) if d not in (5,)]
    s = parse_series("timestamp,value\n" + "".join(f"{t.isoformat()},1\n" for t in stamps), "daily")
    (gap,) = find_gaps(s)
    assert gap.end - gap.start == timedelta(days=1)

    stamps = [T0 + timedelta(days=d) for d in range(20) if d not in (10, 11, 12)]
    s = parse_series("timestamp,value\n" + "".join(f"{t.isoformat()},1\n" for t in stamps), "daily")
    assert find_gaps(s) == [Gap(T0 + timedelta(days=10), T0 + timedelta(days=13))]
    buf = io.StringIO()
    write_gap_report(s, buf)
    assert buf.getvalue().splitlines()[1] == "2016-01-11T00:00:00Z,2016-01-14T00:00:00Z,3"


def test_calendar_grid_fills_gaps_with_nan():
    stamps = [T0 + timedelta(days=d) for d in (0, 1, 3)]
    s = parse_series("timestamp,value\n" + "".join(f"{t.isoformat()},{i}\n" for i, t in enumerate(stamps)), "daily")
    ts, vals, flagged = calendar_grid(s)
    assert len(ts) == 4
    assert np.isnan(vals[2]) and vals[3] == 2
    assert not flagged.any()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_subnormal=False), min_size=1, max_size=40))
def test_csv_round_trip(vals):
    s = daily(vals)
    back = parse_series(series_to_csv(s), "daily")
    assert back.timestamps == s.timestamps
    np.testing.assert_allclose(back.values, s.values, rtol=1e-8, atol=0)
    # a second pass is exact: values are already at 9 significant digits
    assert parse_series(series_to_csv(back), "daily") == back


def test_naive_timestamps_are_utc():
    s = parse_series("timestamp,value\n2016-02-01T06:00:00,1\n", "hourly")
    assert s.samples[0].timestamp.tzinfo == UTC
    s = parse_series("timestamp,value\n2016-02-01T06:00:00+02:00,1\n", "hourly")
    assert s.samples[0].timestamp.hour == 4
