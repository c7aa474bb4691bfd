import io
import re
import logging
from dataclasses import dataclass
from pathlib import Path
import numpy as np
import pandas as pd
from ..errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

HEADER = "timestamp,cpu_util"
MIN_UTIL, MAX_UTIL = 0.0, 100.0
# values this far outside [0, 100] are clamped instead of rejected
CLAMP_TOLERANCE = 0.5

_EPOCH = pd.Timestamp(0, tz="UTC")
_PANDAS_LINE = re.compile(r"line (\d+)")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Univariate CPU-utilization stream: epoch seconds and percent values."""

    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        timestamps = np.asarray(self.timestamps, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if timestamps.ndim != 1 or timestamps.shape != values.shape:
            raise ValidationError("timestamps and values must be 1-d and equally long")
        if not (np.all(np.isfinite(timestamps)) and np.all(np.isfinite(values))):
            raise ValidationError("timestamps and values must be finite")
        if np.any(np.diff(timestamps) <= 0):
            raise ValidationError("timestamps must be strictly increasing")
        if np.any(values < MIN_UTIL) or np.any(values > MAX_UTIL):
            raise ValidationError("values must lie in [0, 100]")
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_points(cls, points) -> "TimeSeries":
        points = list(points)
        return cls(
            np.array([p[0] for p in points], dtype=float),
            np.array([p[1] for p in points], dtype=float),
        )

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.timestamps.tolist(), self.values.tolist()))

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return np.array_equal(self.timestamps, other.timestamps) and np.array_equal(
            self.values, other.values
        )


def _parse_timestamps(column: pd.Series) -> pd.Series:
    seconds = pd.to_numeric(column, errors="coerce")
    iso_rows = seconds.isna() & (column.str.strip() != "")
    if iso_rows.any():
        parsed = pd.to_datetime(
            column[iso_rows], utc=True, format="ISO8601", errors="coerce"
        )
        seconds.loc[iso_rows] = (parsed - _EPOCH) / pd.Timedelta(seconds=1)
    return seconds


def parse_csv(raw_text: str) -> TimeSeries:
    """
    Parse `timestamp,cpu_util` CSV text into a sorted TimeSeries.

    Timestamps are Unix epoch seconds or ISO-8601 (UTC assumed when no offset
    is given). Duplicate timestamps collapse to their mean. Reported line
    numbers are 1-based and count the header as line 1.
    """
    if not raw_text or not raw_text.strip():
        raise ValidationError("empty CSV input")

    header = raw_text.lstrip("\ufeff").splitlines()[0].strip()
    if header != HEADER:
        raise ParseError(f"expected header '{HEADER}', got '{header}'", line=1)

    try:
        frame = pd.read_csv(
            io.StringIO(raw_text.lstrip("\ufeff")),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        raise ParseError("malformed row", line=int(match.group(1)) if match else None) from e

    # trailing newline produces no row, interior blank lines do
    if frame.empty:
        raise ValidationError("CSV has a header but no rows")

    timestamps = _parse_timestamps(frame["timestamp"])
    values = pd.to_numeric(frame["cpu_util"], errors="coerce")

    bad = timestamps.isna() | values.isna() | ~np.isfinite(values) | ~np.isfinite(timestamps)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(
            f"cannot parse row '{frame['timestamp'].iloc[row]},{frame['cpu_util'].iloc[row]}'",
            line=row + 2,
        )

    outside = (values < MIN_UTIL - CLAMP_TOLERANCE) | (values > MAX_UTIL + CLAMP_TOLERANCE)
    if outside.any():
        row = int(np.flatnonzero(outside.to_numpy())[0])
        raise ValidationError(
            f"line {row + 2}: cpu_util {values.iloc[row]} outside [0, 100]"
        )
    clamped = (values < MIN_UTIL) | (values > MAX_UTIL)
    if clamped.any():
        logger.warning(f"Clamped {int(clamped.sum())} values into [0, 100]")
        values = values.clip(MIN_UTIL, MAX_UTIL)

    collapsed = (
        pd.DataFrame({"timestamp": timestamps.astype(float), "cpu_util": values.astype(float)})
        .groupby("timestamp", sort=True)["cpu_util"]
        .mean()
    )
    if len(collapsed) < len(frame):
        logger.warning(
            f"Collapsed {len(frame) - len(collapsed)} duplicate timestamps to their mean"
        )
    return TimeSeries(collapsed.index.to_numpy(dtype=float), collapsed.to_numpy(dtype=float))


def load_csv(path) -> TimeSeries:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def write_csv(series: TimeSeries) -> str:
    """Emit the series as `timestamp,cpu_util` CSV with 6-decimal values."""
    timestamps = series.timestamps
    if np.all(timestamps == np.round(timestamps)):
        timestamps = timestamps.astype(np.int64)
    frame = pd.DataFrame({"timestamp": timestamps, "cpu_util": series.values})
    return frame.to_csv(index=False, float_format="%.6f", lineterminator="\n")


def resample_1min(series: TimeSeries) -> TimeSeries:
    """
    Put the series on a 60-second grid.

    The grid starts at the first timestamp floored to the minute, each bucket
    holds the mean of its points and empty interior buckets are linearly
    interpolated. A single point comes back unchanged.
    """
    if len(series) == 0:
        raise ValidationError("cannot resample an empty series")
    if len(series) == 1:
        return series

    index = pd.to_datetime(series.timestamps, unit="s")
    buckets = pd.Series(series.values, index=index).resample("1min").mean()
    if buckets.isna().all():
        raise ValidationError("every resampling bucket is empty")
    filled = buckets.interpolate(method="linear")
    seconds = (filled.index - pd.Timestamp(0)) / pd.Timedelta(seconds=1)
    return TimeSeries(np.asarray(seconds, dtype=float), filled.to_numpy(dtype=float))
