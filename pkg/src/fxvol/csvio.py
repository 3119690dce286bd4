"""CSV ingestion and emission.

Input files need a header row, ISO-8601 dates (YYYY-MM-DD) and ``.`` as the
decimal separator.  Quote files carry ``date,buy,sell`` columns and case
files ``date,cases``; column names are overridable.  Rows are sorted by
date on load; duplicate dates and non-finite values are rejected (or
dropped under ``drop_missing``) -- never filled in.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from pathlib import Path

from .errors import DataError
from .timeseries import DatedSeries, QuoteSeries


def _open_reader(path):
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    return path


def _require_columns(fieldnames, wanted, path):
    if fieldnames is None:
        raise DataError(f"{path}: file is empty (header row required)")
    missing = [c for c in wanted if c not in fieldnames]
    if missing:
        raise DataError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"available columns: {', '.join(fieldnames)}"
        )


def _parse_date(cell, path, line_num):
    try:
        return dt.date.fromisoformat((cell or "").strip())
    except ValueError:
        raise DataError(f"{path}:{line_num}: bad date {cell!r} (expected YYYY-MM-DD)") from None


def _parse_value(cell, path, line_num, col):
    cell = (cell or "").strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"{path}:{line_num}: bad number {cell!r} in column {col!r}") from None
    if not math.isfinite(value):
        return None
    return value


def _read_rows(path, columns, drop_missing):
    """Yield (date, values...) tuples sorted by date; handle missing policy."""
    path = _open_reader(path)
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        _require_columns(reader.fieldnames, columns, path)
        for record in reader:
            line = reader.line_num
            date = _parse_date(record[columns[0]], path, line)
            values = [_parse_value(record[c], path, line, c) for c in columns[1:]]
            if any(v is None for v in values):
                if drop_missing:
                    continue
                col = columns[1:][[v is None for v in values].index(True)]
                raise DataError(
                    f"{path}:{line}: missing or non-finite value in column {col!r} "
                    f"(use --drop-missing to drop such rows)"
                )
            rows.append((date, *values))
    if not rows:
        raise DataError(f"{path}: no usable data rows")
    rows.sort(key=lambda r: r[0])
    for (a, *_), (b, *_) in zip(rows, rows[1:]):
        if a == b:
            raise DataError(f"{path}: duplicate date {a.isoformat()}")
    return rows


def load_series_csv(
    path,
    value_col: str,
    date_col: str = "date",
    label: str | None = None,
    drop_missing: bool = False,
) -> DatedSeries:
    """Load one date/value column pair from a CSV file."""
    rows = _read_rows(path, (date_col, value_col), drop_missing)
    dates = tuple(r[0] for r in rows)
    values = [r[1] for r in rows]
    return DatedSeries(dates, values, label or Path(path).stem)


def load_quote_csv(
    path,
    date_col: str = "date",
    buy_col: str = "buy",
    sell_col: str = "sell",
    label: str | None = None,
    drop_missing: bool = False,
) -> QuoteSeries:
    """Load a date/buy/sell quote file."""
    rows = _read_rows(path, (date_col, buy_col, sell_col), drop_missing)
    dates = tuple(r[0] for r in rows)
    return QuoteSeries(
        dates,
        [r[1] for r in rows],
        [r[2] for r in rows],
        label or Path(path).stem,
    )


def write_quote_csv(path, series: DatedSeries) -> None:
    """Write a level series as a date,buy,sell quote file (buy = sell = level)."""
    _write_columns(path, ("date", "buy", "sell"),
                   ((d, v, v) for d, v in zip(series.dates, series.values)))


def write_cases_csv(path, series: DatedSeries) -> None:
    """Write a count series as a date,cases file."""
    _write_columns(path, ("date", "cases"), zip(series.dates, series.values))


def write_dataset_csv(path, dates, columns: dict) -> None:
    """Write a date-indexed table; ``columns`` maps header name -> vector."""
    _write_columns(path, ("date", *columns),
                   ((d, *vals) for d, *vals in zip(dates, *columns.values())))


def _write_columns(path, header, rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for date, *values in rows:
            writer.writerow([date.isoformat()] + [format(v, ".17g") for v in values])
