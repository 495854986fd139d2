"""
Price records to absolute log-return (volatility) series.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .core import MFDMAError


class ParseError(MFDMAError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NonPositivePrice(MFDMAError):
    pass


class UnsortedTimestamps(MFDMAError):
    pass


@dataclass(frozen=True)
class PriceSeries:
    timestamps: np.ndarray  # datetime64[s]
    close: np.ndarray
    instrument: str = ""

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype="datetime64[s]")
        close = np.asarray(self.close, dtype=float)
        if ts.shape != close.shape or close.ndim != 1:
            raise MFDMAError("timestamps and closes must be 1D and equally long")
        if np.any(~np.isfinite(close)) or np.any(close <= 0):
            bad = int(np.argmax(~(close > 0) | ~np.isfinite(close)))
            raise NonPositivePrice(f"non-positive close {close[bad]!r} at record {bad}")
        if ts.size > 1 and np.any(np.diff(ts) <= np.timedelta64(0, "s")):
            bad = int(np.argmax(np.diff(ts) <= np.timedelta64(0, "s"))) + 1
            raise UnsortedTimestamps(f"timestamp {ts[bad]} at record {bad} is not increasing")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "close", close)

    def __len__(self):
        return self.close.size


@dataclass(frozen=True)
class VolatilitySeries:
    values: np.ndarray
    instrument: str = ""
    start: str = ""
    end: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return int(self.values.size)


def volatility(prices, drop_session_gaps: bool = False) -> VolatilitySeries:
    """Absolute log returns ``|ln P(t) - ln P(t-1)|``.

    Parameters
    ----------
    prices : PriceSeries or array-like of closes
    drop_session_gaps : bool
        Drop the returns that straddle a calendar-day change (overnight and
        weekend gaps). Kept by default, so the output has ``len(prices) - 1``
        points.
    """
    if not isinstance(prices, PriceSeries):
        close = np.asarray(prices, dtype=float)
        prices = PriceSeries(np.arange(close.size).astype("datetime64[m]"), close)
    if len(prices) < 2:
        raise MFDMAError("need at least two prices")
    p = prices.close
    r = np.abs(np.log(p[1:] / p[:-1]))
    if drop_session_gaps:
        days = prices.timestamps.astype("datetime64[D]")
        r = r[days[1:] == days[:-1]]
    ts = prices.timestamps
    return VolatilitySeries(r, prices.instrument, str(ts[0]), str(ts[-1]),
                            {"n_prices": len(prices), "dropped_gaps": drop_session_gaps})


def read_prices(path, instrument: str | None = None) -> PriceSeries:
    """Read a ``timestamp,close`` CSV (UTF-8, ISO-8601 timestamps)."""
    stamps, closes = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["timestamp", "close"]:
            raise ParseError("expected header 'timestamp,close'", 1)
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line)
            try:
                stamps.append(datetime.fromisoformat(row[0].strip()))
            except ValueError:
                raise ParseError(f"bad timestamp {row[0]!r}", line) from None
            try:
                closes.append(float(row[1]))
            except ValueError:
                raise ParseError(f"bad close {row[1]!r}", line) from None
    if not closes:
        raise ParseError("no price records", None)
    ts = np.array([np.datetime64(t.replace(tzinfo=None), "s") for t in stamps])
    name = instrument if instrument is not None else str(path)
    return PriceSeries(ts, np.array(closes), name)


def write_prices(path, prices: PriceSeries):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["timestamp", "close"])
        for t, c in zip(prices.timestamps, prices.close):
            w.writerow([str(t), repr(float(c))])
