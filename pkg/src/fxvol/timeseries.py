"""Date-indexed series containers and the transforms that make them estimation-ready.

All containers are immutable after construction: values live in read-only
float arrays and dates in tuples.  Transforms return new objects, so any
container can be shared freely across threads.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError

#: Hard floor on estimation dataset length: a GARCH fit on fewer rows is
#: numerically meaningless, so shorter datasets are rejected outright.
MIN_FIT_OBS = 30

ALIGN_POLICIES = ("intersect", "carry-forward")


def _freeze(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    arr.flags.writeable = False
    return arr


def _check_dates(dates) -> tuple[dt.date, ...]:
    dates = tuple(dates)
    if not dates:
        raise DataError("series needs at least one observation")
    for d in dates:
        if not isinstance(d, dt.date):
            raise DataError(f"dates must be datetime.date, got {type(d).__name__!r}")
    for prev, cur in zip(dates, dates[1:]):
        if cur <= prev:
            raise DataError(
                f"dates must be strictly increasing without duplicates; offending date {cur.isoformat()}"
            )
    return dates


def _dates64(dates) -> np.ndarray:
    return np.array(dates, dtype="datetime64[D]")


@dataclass(frozen=True)
class DatedSeries:
    """A date-indexed sequence of real observations.

    Invariants enforced at construction: dates strictly increasing with no
    duplicates, values finite, and one value per date.
    """

    dates: tuple[dt.date, ...]
    values: np.ndarray
    label: str = "series"

    def __post_init__(self):
        dates = _check_dates(self.dates)
        values = _freeze(self.values, "values")
        if len(values) != len(dates):
            raise DataError(
                f"length mismatch: {len(dates)} dates vs {len(values)} values"
            )
        if not np.isfinite(values).all():
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise DataError(f"non-finite value at {dates[bad].isoformat()}")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def relabel(self, label: str) -> "DatedSeries":
        return DatedSeries(self.dates, self.values, label)


@dataclass(frozen=True)
class QuoteSeries:
    """Daily buy/sell quotes for one instrument."""

    dates: tuple[dt.date, ...]
    buy: np.ndarray
    sell: np.ndarray
    label: str = "quotes"

    def __post_init__(self):
        dates = _check_dates(self.dates)
        buy = _freeze(self.buy, "buy")
        sell = _freeze(self.sell, "sell")
        if len(buy) != len(dates) or len(sell) != len(dates):
            raise DataError("quote columns must have one value per date")
        for name, col in (("buy", buy), ("sell", sell)):
            if not np.isfinite(col).all():
                bad = int(np.flatnonzero(~np.isfinite(col))[0])
                raise DataError(f"non-finite {name} quote at {dates[bad].isoformat()}")
            if (col <= 0).any():
                bad = int(np.flatnonzero(col <= 0)[0])
                raise DataError(
                    f"non-positive {name} quote at {dates[bad].isoformat()}"
                )
        if (sell < buy).any():
            bad = int(np.flatnonzero(sell < buy)[0])
            raise DataError(f"sell quote below buy quote at {dates[bad].isoformat()}")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "buy", buy)
        object.__setattr__(self, "sell", sell)

    def __len__(self) -> int:
        return len(self.buy)


@dataclass(frozen=True)
class AlignedDataset:
    """Paired (return, exogenous) observations on a common date index."""

    dates: tuple[dt.date, ...]
    returns: np.ndarray
    exog: np.ndarray

    def __post_init__(self):
        dates = _check_dates(self.dates)
        returns = _freeze(self.returns, "returns")
        exog = _freeze(self.exog, "exog")
        if len(returns) != len(dates) or len(exog) != len(dates):
            raise DataError("returns and exog must share the date index")
        for name, col in (("returns", returns), ("exog", exog)):
            if not np.isfinite(col).all():
                bad = int(np.flatnonzero(~np.isfinite(col))[0])
                raise DataError(f"non-finite {name} value at {dates[bad].isoformat()}")
        if len(dates) < MIN_FIT_OBS:
            raise DataError(
                f"dataset has {len(dates)} rows; at least {MIN_FIT_OBS} are required"
            )
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "exog", exog)

    def __len__(self) -> int:
        return len(self.returns)


def mid_rate(quotes: QuoteSeries) -> DatedSeries:
    """Mid price (buy + sell) / 2 per date."""
    return DatedSeries(quotes.dates, (quotes.buy + quotes.sell) / 2.0, quotes.label)


def log_returns(series: DatedSeries) -> DatedSeries:
    """Log returns ln(p_t) - ln(p_{t-1}); output is one shorter than the input.

    The value at output position t carries the date of the later level p_t.
    All levels must be strictly positive.
    """
    if len(series) < 2:
        raise DataError("log returns need at least two observations")
    if (series.values <= 0).any():
        bad = int(np.flatnonzero(series.values <= 0)[0])
        raise DataError(
            f"non-positive level at {series.dates[bad].isoformat()}; cannot take logs"
        )
    vals = np.diff(np.log(series.values))
    return DatedSeries(series.dates[1:], vals, series.label)


def first_difference(series: DatedSeries) -> DatedSeries:
    """First difference x_t - x_{t-1}; output is one shorter than the input."""
    if len(series) < 2:
        raise DataError("first difference needs at least two observations")
    return DatedSeries(series.dates[1:], np.diff(series.values), series.label)


def log_transform(series: DatedSeries, shift: float = 0.0) -> DatedSeries:
    """Elementwise ln(x_t + shift).

    A positive shift (typically 1) makes zero counts representable; with the
    default shift of 0 any non-positive value is an error.
    """
    shifted = series.values + float(shift)
    if (shifted <= 0).any():
        bad = int(np.flatnonzero(shifted <= 0)[0])
        raise DataError(
            f"non-positive value at {series.dates[bad].isoformat()} under shift {shift}"
        )
    return DatedSeries(series.dates, np.log(shifted), series.label)


def align(returns: DatedSeries, exog: DatedSeries, policy: str = "intersect") -> AlignedDataset:
    """Pair a return series with an exogenous series on a common date index.

    ``intersect`` keeps dates present in both series.  ``carry-forward``
    keeps every return date and fills the exogenous value with the most
    recent exogenous observation at or before that date (return dates with
    no earlier exogenous observation are dropped).  Values are never
    interpolated.
    """
    if policy not in ALIGN_POLICIES:
        raise ConfigError(
            f"unknown align policy {policy!r}; choose from {ALIGN_POLICIES}"
        )
    r64 = _dates64(returns.dates)
    x64 = _dates64(exog.dates)
    if policy == "intersect":
        common, r_idx, x_idx = np.intersect1d(r64, x64, return_indices=True)
        if common.size == 0:
            raise DataError("return and exogenous series share no dates")
        dates = tuple(returns.dates[i] for i in r_idx)
        r_vals = returns.values[r_idx]
        x_vals = exog.values[x_idx]
    else:
        pos = np.searchsorted(x64, r64, side="right") - 1
        keep = pos >= 0
        if not keep.any():
            raise DataError("no exogenous observations at or before any return date")
        dates = tuple(d for d, k in zip(returns.dates, keep) if k)
        r_vals = returns.values[keep]
        x_vals = exog.values[pos[keep]]
    if len(dates) < MIN_FIT_OBS:
        raise DataError(
            f"alignment left {len(dates)} rows; at least {MIN_FIT_OBS} are required"
        )
    return AlignedDataset(dates, r_vals, x_vals)


def split_period(data: AlignedDataset, cutoff: dt.date) -> tuple[AlignedDataset, AlignedDataset]:
    """Split a dataset at a cutoff date: first part holds dates <= cutoff.

    Both parts must satisfy the minimum-length floor. The cutoff must lie
    strictly inside the date range so that neither part is empty.
    """
    if cutoff < data.dates[0] or cutoff >= data.dates[-1]:
        raise DataError(
            f"cutoff {cutoff.isoformat()} is outside the data range "
            f"{data.dates[0].isoformat()}..{data.dates[-1].isoformat()}"
        )
    n_first = int(np.searchsorted(_dates64(data.dates), np.datetime64(cutoff, "D"), side="right"))
    for name, n in (("first", n_first), ("second", len(data) - n_first)):
        if n < MIN_FIT_OBS:
            raise DataError(
                f"{name} period has {n} rows; at least {MIN_FIT_OBS} are required"
            )
    first = AlignedDataset(data.dates[:n_first], data.returns[:n_first], data.exog[:n_first])
    second = AlignedDataset(data.dates[n_first:], data.returns[n_first:], data.exog[n_first:])
    return first, second


def restrict(data: AlignedDataset, start: dt.date | None = None, end: dt.date | None = None) -> AlignedDataset:
    """Subset of the dataset with start <= date <= end (either bound optional)."""
    keep = np.ones(len(data), dtype=bool)
    d64 = _dates64(data.dates)
    if start is not None:
        keep &= d64 >= np.datetime64(start, "D")
    if end is not None:
        keep &= d64 <= np.datetime64(end, "D")
    if not keep.any():
        raise DataError("no observations inside the requested date range")
    dates = tuple(d for d, k in zip(data.dates, keep) if k)
    return AlignedDataset(dates, data.returns[keep], data.exog[keep])
