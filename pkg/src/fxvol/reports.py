"""Report assembly and rendering (text, CSV, JSON).

Every number that reaches any output format passes through one canonical
6-significant-digit rounding, so the three renderings agree exactly on
numeric values: text and CSV print ``fmt(v)`` and JSON carries the float
parsed from that very string.  Values below 1e-4 in magnitude print in
scientific notation.

The machine formats (CSV, JSON) emit tidy tables; the text format lays the
same numbers out in the familiar report shapes (statistics as rows with one
column per series, unit-root cells as "statistic(p)", estimation blocks per
equation).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import TestResult
from .forecast import ForecastEvaluation, ForecastResult
from .garch import GarchFit

STAT_ROWS = (
    "Mean",
    "Median",
    "Maximum",
    "Minimum",
    "Std. Dev.",
    "Skewness",
    "Kurtosis",
    "Jarque-Bera",
    "Probability",
)


def canon(value):
    """Canonical cell value: floats rounded to 6 significant digits."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(value)
    if math.isnan(v):
        return None
    return float(f"{v:.6G}")


def fmt(value) -> str:
    """Display form of a canonical cell value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return f"{value:.6G}"


@dataclass(frozen=True)
class Table:
    title: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass(frozen=True)
class Report:
    command: str
    tables: tuple[Table, ...]
    text_lines: tuple[str, ...]
    notes: tuple[str, ...] = ()


def render(report: Report, output_format: str) -> str:
    if output_format == "text":
        return render_text(report)
    if output_format == "csv":
        return render_csv(report)
    if output_format == "json":
        return render_json(report)
    raise ValueError(f"unknown output format {output_format!r}")


def render_text(report: Report) -> str:
    lines = list(report.text_lines)
    if report.notes:
        lines.append("")
        lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    chunks = []
    for table in report.tables:
        lines = [f"# {table.title}", ",".join(_csv_escape(c) for c in table.columns)]
        for row in table.rows:
            lines.append(",".join(_csv_escape(fmt(cell)) for cell in row))
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def _csv_escape(cell: str) -> str:
    if any(ch in cell for ch in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def render_json(report: Report) -> str:
    payload = {
        "command": report.command,
        "tables": [
            {
                "title": t.title,
                "columns": list(t.columns),
                "rows": [list(row) for row in t.rows],
            }
            for t in report.tables
        ],
        "notes": list(report.notes),
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _grid(headers, rows, indent: str = "") -> list[str]:
    """Left-aligned fixed-width text table."""
    table = [list(headers)] + [[fmt(c) if not isinstance(c, str) else c for c in r] for r in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    out = []
    for r in table:
        out.append(indent + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return out


# --- builders ---------------------------------------------------------------


def stats_report(named) -> Report:
    """Summary-statistics report; ``named`` is a list of (label, SummaryStats)."""
    labels = [label for label, _ in named]
    values = {
        "Mean": [s.mean for _, s in named],
        "Median": [s.median for _, s in named],
        "Maximum": [s.maximum for _, s in named],
        "Minimum": [s.minimum for _, s in named],
        "Std. Dev.": [s.std_dev for _, s in named],
        "Skewness": [s.skewness for _, s in named],
        "Kurtosis": [s.kurtosis for _, s in named],
        "Jarque-Bera": [s.jarque_bera for _, s in named],
        "Probability": [s.jb_p_value for _, s in named],
    }
    rows = tuple(
        (name, *[canon(v) for v in vals]) for name, vals in values.items()
    )
    table = Table("Summary statistics", ("statistic", *labels), rows)
    lines = ["Summary statistics", ""]
    lines += _grid(["", *labels], rows)
    lines.append("")
    lines.append("Observations: " + ", ".join(f"{label}={s.n}" for label, s in named))
    return Report("stats", (table,), tuple(lines))


def unitroot_report(named) -> Report:
    """Unit-root report; ``named`` is a list of (label, adf, pp) triples."""
    rows = []
    for label, adf, pp in named:
        rows.append(
            (
                label,
                canon(adf.statistic),
                canon(adf.p_value),
                adf.lags_used,
                canon(pp.statistic),
                canon(pp.p_value),
                pp.lags_used,
            )
        )
    table = Table(
        "Unit root tests",
        ("series", "adf_stat", "adf_p", "adf_lags", "pp_stat", "pp_p", "pp_bandwidth"),
        tuple(rows),
    )
    crit = named[0][1].critical_values if named else {}
    lines = ["Unit root tests (null hypothesis: the series has a unit root)", ""]
    text_rows = [
        (label, f"{fmt(r[1])}({fmt(r[2])})", f"{fmt(r[4])}({fmt(r[5])})")
        for (label, *_), r in zip(named, rows)
    ]
    lines += _grid(["series", "ADF", "PP"], text_rows)
    lines.append("")
    lines.append("cells are statistic(p-value)")
    if crit:
        lines.append(
            "ADF critical values: "
            + ", ".join(f"{lvl} {fmt(canon(cv))}" for lvl, cv in crit.items())
        )
    return Report("unitroot", (table,), tuple(lines))


PARAM_LAYOUT = (
    ("mean", "constant", "alpha0"),
    ("mean", "exog", "alpha1"),
    ("variance", "garch term", "beta1"),
    ("variance", "arch term", "beta2"),
    ("variance", "constant", "beta0"),
)


@dataclass(frozen=True)
class FitEntry:
    label: str
    fit: GarchFit
    serial: TestResult
    arch: TestResult


def _parameter_rows(label: str, fit: GarchFit, extra=()):
    rows = []
    table = fit.param_dict()
    for block, pretty, name in PARAM_LAYOUT:
        cell = table[name]
        rows.append(
            (
                *extra,
                label,
                block,
                pretty,
                canon(cell["estimate"]),
                canon(cell["std_error"]),
                canon(cell["z"]),
                canon(cell["p"]),
            )
        )
    return rows


def _diagnostic_rows(label: str, serial: TestResult, arch: TestResult, extra=()):
    out = []
    for test, res in (("serial correlation", serial), ("arch effect", arch)):
        out.append(
            (
                *extra,
                label,
                test,
                res.lags,
                canon(res.statistic),
                canon(res.p_value),
                "yes" if res.verdict_at_5pct == "reject" else "no",
            )
        )
    return out


def _fit_text_block(entries, caption: str) -> list[str]:
    labels = [e.label for e in entries]
    lines = [caption, ""]

    def param_row(pretty, name):
        cells = []
        for e in entries:
            c = e.fit.param_dict()[name]
            cells.append(f"{fmt(canon(c['estimate']))} ({fmt(canon(c['z']))})")
        return (pretty, *cells)

    def p_row(name):
        return ("  p-value", *[fmt(canon(e.fit.param_dict()[name]["p"])) for e in entries])

    rows = [
        ("Mean equation:", *[""] * len(entries)),
        param_row("  constant", "alpha0"),
        param_row("  exog", "alpha1"),
        p_row("alpha1"),
        ("Variance equation:", *[""] * len(entries)),
        param_row("  garch term (b1)", "beta1"),
        param_row("  arch term (b2)", "beta2"),
        param_row("  constant (b0)", "beta0"),
        ("Observations", *[str(e.fit.nobs) for e in entries]),
        ("Log-likelihood", *[fmt(canon(e.fit.log_likelihood)) for e in entries]),
        ("Converged", *[fmt(e.fit.converged) for e in entries]),
        (
            "Serial correlation",
            *[
                f"{'Yes' if e.serial.verdict_at_5pct == 'reject' else 'No'}"
                f" (Q={fmt(canon(e.serial.statistic))}, p={fmt(canon(e.serial.p_value))})"
                for e in entries
            ],
        ),
        (
            "ARCH effect",
            *[
                f"{'Yes' if e.arch.verdict_at_5pct == 'reject' else 'No'}"
                f" (LM={fmt(canon(e.arch.statistic))}, p={fmt(canon(e.arch.p_value))})"
                for e in entries
            ],
        ),
    ]
    lines += _grid(["", *labels], rows)
    lines.append("")
    lines.append("parameter cells are estimate (z statistic)")
    return lines


def fit_report(entries) -> Report:
    """Estimation report; ``entries`` is a list of FitEntry."""
    param_rows, summary_rows, diag_rows = [], [], []
    for e in entries:
        param_rows += _parameter_rows(e.label, e.fit)
        summary_rows.append(
            (
                e.label,
                e.fit.nobs,
                canon(e.fit.log_likelihood),
                canon(e.fit.h0),
                e.fit.converged,
                e.fit.iterations,
            )
        )
        diag_rows += _diagnostic_rows(e.label, e.serial, e.arch)
    tables = (
        Table(
            "Parameters",
            ("series", "block", "parameter", "estimate", "std_error", "z", "p"),
            tuple(param_rows),
        ),
        Table(
            "Fit summary",
            ("series", "observations", "log_likelihood", "h0", "converged", "iterations"),
            tuple(summary_rows),
        ),
        Table(
            "Diagnostics",
            ("series", "test", "lags", "statistic", "p", "effect_at_5pct"),
            tuple(diag_rows),
        ),
    )
    lines = _fit_text_block(entries, "GARCH(1,1) estimation with exogenous mean regressor")
    return Report("fit", tables, tuple(lines))


@dataclass(frozen=True)
class SplitEntry:
    label: str
    first: FitEntry
    second: FitEntry


def split_compare_report(cutoff, entries) -> Report:
    """Two-period comparison report; ``entries`` is a list of SplitEntry."""
    param_rows, summary_rows, diag_rows, compare_rows = [], [], [], []
    for e in entries:
        for period, fe in (("1", e.first), ("2", e.second)):
            param_rows += _parameter_rows(e.label, fe.fit, extra=(period,))
            summary_rows.append(
                (
                    period,
                    e.label,
                    fe.fit.nobs,
                    canon(fe.fit.log_likelihood),
                    fe.fit.converged,
                )
            )
            diag_rows += _diagnostic_rows(e.label, fe.serial, fe.arch, extra=(period,))
        p1 = e.first.fit.params
        p2 = e.second.fit.params
        for name in ("alpha0", "alpha1", "beta0", "beta1", "beta2"):
            v1, v2 = getattr(p1, name), getattr(p2, name)
            compare_rows.append(
                (e.label, name, canon(v1), canon(v2), canon(v2 - v1))
            )
        s1, s2 = p1.beta1 + p1.beta2, p2.beta1 + p2.beta2
        compare_rows.append(
            (e.label, "persistence (b1+b2)", canon(s1), canon(s2), canon(s2 - s1))
        )
        flipped = (p1.alpha1 < 0) != (p2.alpha1 < 0)
        compare_rows.append(
            (
                e.label,
                "exog coef sign",
                "-" if p1.alpha1 < 0 else "+",
                "-" if p2.alpha1 < 0 else "+",
                "flip" if flipped else "same",
            )
        )
    tables = (
        Table(
            "Parameters by period",
            ("period", "series", "block", "parameter", "estimate", "std_error", "z", "p"),
            tuple(param_rows),
        ),
        Table(
            "Fit summary by period",
            ("period", "series", "observations", "log_likelihood", "converged"),
            tuple(summary_rows),
        ),
        Table(
            "Diagnostics by period",
            ("period", "series", "test", "lags", "statistic", "p", "effect_at_5pct"),
            tuple(diag_rows),
        ),
        Table(
            "Period comparison",
            ("series", "measure", "period1", "period2", "change"),
            tuple(compare_rows),
        ),
    )
    lines = []
    lines += _fit_text_block(
        [e.first for e in entries], f"Period 1 (through {cutoff.isoformat()})"
    )
    lines.append("")
    lines += _fit_text_block(
        [e.second for e in entries], f"Period 2 (after {cutoff.isoformat()})"
    )
    lines.append("")
    lines.append("Parameter changes between periods")
    lines.append("")
    text_rows = [
        (r[0], r[1], fmt(r[2]), fmt(r[3]), fmt(r[4])) for r in compare_rows
    ]
    lines += _grid(["series", "measure", "period 1", "period 2", "change"], text_rows)
    return Report("split-compare", tables, tuple(lines))


@dataclass(frozen=True)
class ForecastEntry:
    label: str
    result: ForecastResult
    evaluation: ForecastEvaluation


def forecast_report(entries) -> Report:
    """Forecast-evaluation report; ``entries`` is a list of ForecastEntry."""
    rows = []
    for e in entries:
        rows.append(
            (
                e.label,
                e.result.mode,
                e.result.dates[0].isoformat(),
                e.result.dates[-1].isoformat(),
                canon(e.evaluation.rmse),
                canon(e.evaluation.mae),
                canon(e.evaluation.theil_u),
            )
        )
    table = Table(
        "Forecast evaluation",
        ("series", "mode", "window_start", "window_end", "rmse", "mae", "theil_u"),
        tuple(rows),
    )
    lines = ["Forecast evaluation against the realized-variance proxy", ""]
    text_rows = []
    for e, r in zip(entries, rows):
        text_rows.append((e.label, "RMSE", fmt(r[4])))
        text_rows.append(("", "MAE", fmt(r[5])))
        text_rows.append(("", "Theil inequality coefficient", fmt(r[6])))
    lines += _grid(["series", "metric", "value"], text_rows)
    lines.append("")
    first = entries[0].result
    lines.append(
        f"mode: {first.mode}; window {first.dates[0].isoformat()}"
        f"..{first.dates[-1].isoformat()}; origin {first.origin.isoformat()}"
    )
    return Report("forecast", (table,), tuple(lines))
