"""Command-line front end: ingest -> transform -> test -> fit -> forecast -> report.

Subcommands: stats, unitroot, fit, split-compare, forecast, simulate.
Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
failure (a fit that did not converge).  Every command is deterministic
given its input files, flags and seed.

A config file (``key = value`` lines, keys matching the long flag names)
can supply any flag's value; flags given on the command line win.
"""

from __future__ import annotations

import datetime as dt
import sys
from pathlib import Path

import click
import numpy as np

from . import csvio, plots, reports
from .descriptive import summary_stats
from .diagnostics import arch_lm, ljung_box
from .errors import ConfigError, DataError, FxvolError, NumericalError
from .forecast import evaluate, forecast_dynamic, forecast_static
from .garch import FitOptions, GarchParams, fit as garch_fit
from .simulate import SimConfig, counts_from_increments, levels_from_returns, simulate
from .timeseries import (
    DatedSeries,
    align,
    first_difference,
    log_returns,
    log_transform,
    mid_rate,
    restrict,
    split_period,
)
from .unitroot import adf_test, pp_test


class IsoDate(click.ParamType):
    name = "date"

    def convert(self, value, param, ctx):
        if isinstance(value, dt.date):
            return value
        try:
            return dt.date.fromisoformat(value)
        except ValueError:
            self.fail(f"{value!r} is not an ISO date (YYYY-MM-DD)", param, ctx)


ISO_DATE = IsoDate()


def _add_options(options):
    def wrap(func):
        for option in reversed(options):
            func = option(func)
        return func

    return wrap


_INPUT_OPTIONS = [
    click.option("--rates", multiple=True, type=click.Path(), help="Quote CSV (date,buy,sell); repeatable."),
    click.option("--cases", type=click.Path(), default=None, help="Exogenous count CSV (date,cases)."),
    click.option("--date-col", default="date", show_default=True),
    click.option("--buy-col", default="buy", show_default=True),
    click.option("--sell-col", default="sell", show_default=True),
    click.option("--cases-col", default="cases", show_default=True),
    click.option(
        "--exog-transform",
        type=click.Choice(["diff", "log", "none"]),
        default="diff",
        show_default=True,
        help="Transform applied to the exogenous series.",
    ),
    click.option("--log-shift", type=float, default=0.0, show_default=True,
                 help="Shift added before the log transform."),
    click.option("--drop-missing", is_flag=True, default=False,
                 help="Drop rows with missing values instead of rejecting the file."),
]

_ALIGN_OPTION = click.option(
    "--align",
    "align_policy",
    type=click.Choice(["intersect", "carry-forward"]),
    default="intersect",
    show_default=True,
)

_OUTPUT_OPTIONS = [
    click.option("--format", "output_format", type=click.Choice(["text", "csv", "json"]),
                 default="text", show_default=True),
    click.option("--out", type=click.Path(), default=None, help="Write the report here instead of stdout."),
    click.option("--config", type=click.Path(), default=None,
                 help="key = value file supplying defaults for any flag."),
]

_FIT_OPTIONS = [
    click.option("--max-iterations", type=int, default=2000, show_default=True),
    click.option("--lb-lags", type=int, default=10, show_default=True,
                 help="Ljung-Box lag order for residual diagnostics."),
    click.option("--arch-lags", type=int, default=5, show_default=True,
                 help="ARCH-LM lag order for residual diagnostics."),
]

_PLOT_OPTION = click.option("--plot/--no-plot", "do_plot", default=True, show_default=True,
                            help="Render PNG figures next to --out.")


def load_config_file(path) -> dict:
    """Parse a ``key = value`` config file; '#' starts a comment."""
    cfg = {}
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().lower().replace("-", "_")] = value.strip()
    return cfg


def _config_keys(param) -> set:
    """Config-file keys accepted for a click parameter: its long flag names."""
    keys = {param.name}
    for opt in param.opts:
        if opt.startswith("--"):
            keys.add(opt[2:].replace("-", "_"))
    return keys


def _with_config(ctx, kw: dict) -> dict:
    """Overlay config-file values on parameters not set on the command line."""
    config_path = kw.get("config")
    if not config_path:
        return kw
    cfg = load_config_file(config_path)
    by_key = {}
    for param in ctx.command.params:
        if param.name == "config":
            continue
        for key in _config_keys(param):
            by_key[key] = param
    unknown = set(cfg) - set(by_key)
    if unknown:
        raise ConfigError(
            f"unknown config key(s): {', '.join(sorted(unknown))}; "
            f"valid keys: {', '.join(sorted(by_key))}"
        )
    merged = dict(kw)
    from click.core import ParameterSource

    for key, raw in cfg.items():
        param = by_key[key]
        if ctx.get_parameter_source(param.name) == ParameterSource.COMMANDLINE:
            continue
        try:
            if param.multiple:
                merged[param.name] = tuple(
                    param.type.convert(v.strip(), param, ctx)
                    for v in raw.split(",")
                    if v.strip()
                )
            elif param.is_flag or isinstance(param.type, click.types.BoolParamType):
                merged[param.name] = raw.lower() in ("1", "true", "yes", "on")
            else:
                merged[param.name] = param.type.convert(raw, param, ctx)
        except click.UsageError as exc:
            raise ConfigError(f"config key {key!r}: {exc.format_message()}") from None
    return merged


def _load_returns(kw) -> list:
    """Load every --rates file into a labelled log-return series."""
    series = []
    for path in kw["rates"]:
        quotes = csvio.load_quote_csv(
            path,
            date_col=kw["date_col"],
            buy_col=kw["buy_col"],
            sell_col=kw["sell_col"],
            drop_missing=kw["drop_missing"],
        )
        series.append(log_returns(mid_rate(quotes)))
    return series


def _load_exog(kw):
    """Load the --cases file and apply the configured transform."""
    raw = csvio.load_series_csv(
        kw["cases"],
        value_col=kw["cases_col"],
        date_col=kw["date_col"],
        drop_missing=kw["drop_missing"],
    )
    transform = kw["exog_transform"]
    if transform == "diff":
        return first_difference(raw).relabel(f"{raw.label}_diff")
    if transform == "log":
        return log_transform(raw, kw["log_shift"]).relabel(f"{raw.label}_log")
    return raw


def _build_datasets(kw):
    """Aligned (label, dataset) pairs for every return series against the exog."""
    if not kw["rates"]:
        raise click.UsageError("at least one --rates file is required")
    if not kw["cases"]:
        raise click.UsageError("--cases is required for estimation commands")
    returns = _load_returns(kw)
    exog = _load_exog(kw)
    return [(r.label, align(r, exog, kw["align_policy"])) for r in returns]


def _emit(report, kw) -> None:
    payload = reports.render(report, kw["output_format"])
    if kw["out"]:
        Path(kw["out"]).write_text(payload)
    else:
        click.echo(payload, nl=False)


def _figure_path(out, label, suffix) -> Path:
    out = Path(out)
    return out.parent / f"{out.stem}_{label}_{suffix}"


def _fit_one(label, dataset, kw):
    options = FitOptions(max_iterations=kw["max_iterations"])
    fitted = garch_fit(dataset, options)
    serial = ljung_box(fitted.std_residuals.values, kw["lb_lags"])
    arch = arch_lm(fitted.std_residuals.values, kw["arch_lags"])
    return reports.FitEntry(label=label, fit=fitted, serial=serial, arch=arch)


@click.group()
@click.version_option(package_name="fxvol")
def cli():
    """Volatility toolkit: GARCH(1,1) with an exogenous mean regressor.

    Exit codes: 0 success, 1 usage or config error, 2 data error,
    3 numerical failure (non-convergence).
    """


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_OUTPUT_OPTIONS)
@click.pass_context
def stats(ctx, **kw):
    """Summary statistics and Jarque-Bera for each input series."""
    kw = _with_config(ctx, kw)
    series = _load_returns(kw)
    if kw["cases"]:
        series.append(_load_exog(kw))
    if not series:
        raise click.UsageError("provide --rates and/or --cases")
    named = [(s.label, summary_stats(s)) for s in series]
    _emit(reports.stats_report(named), kw)
    return 0


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_OUTPUT_OPTIONS)
@click.option("--deterministic", type=click.Choice(["none", "constant", "constant+trend"]),
              default="constant", show_default=True)
@click.option("--lags", type=int, default=None, help="ADF max augmentation lags (default: Schwert rule).")
@click.option("--lag-selection", type=click.Choice(["fixed", "aic", "bic"]),
              default="bic", show_default=True)
@click.option("--bandwidth", type=int, default=None, help="PP Newey-West bandwidth (default: automatic).")
@click.pass_context
def unitroot(ctx, **kw):
    """ADF and PP unit-root tests for each input series."""
    kw = _with_config(ctx, kw)
    series = _load_returns(kw)
    if kw["cases"]:
        series.append(_load_exog(kw))
    if not series:
        raise click.UsageError("provide --rates and/or --cases")
    named = []
    for s in series:
        adf = adf_test(s, max_lags=kw["lags"], deterministic=kw["deterministic"],
                       lag_selection=kw["lag_selection"])
        pp = pp_test(s, deterministic=kw["deterministic"], bandwidth=kw["bandwidth"])
        named.append((s.label, adf, pp))
    _emit(reports.unitroot_report(named), kw)
    return 0


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_ALIGN_OPTION
@_add_options(_FIT_OPTIONS)
@_add_options(_OUTPUT_OPTIONS)
@_PLOT_OPTION
@click.pass_context
def fit(ctx, **kw):
    """GARCH(1,1) estimation for each return series against the exogenous series."""
    kw = _with_config(ctx, kw)
    entries = [
        _fit_one(label, dataset, kw) for label, dataset in _build_datasets(kw)
    ]
    _emit(reports.fit_report(entries), kw)
    if kw["out"] and kw["do_plot"]:
        for e in entries:
            plots.save_variance_figure(
                _figure_path(kw["out"], e.label, "variance.png"),
                e.fit.dates,
                e.fit.residuals.values,
                e.fit.cond_variance.values,
                e.label,
            )
    return 0 if all(e.fit.converged for e in entries) else 3


@cli.command("split-compare")
@_add_options(_INPUT_OPTIONS)
@_ALIGN_OPTION
@click.option("--cutoff", type=ISO_DATE, required=True,
              help="Last date of the first period (ISO).")
@_add_options(_FIT_OPTIONS)
@_add_options(_OUTPUT_OPTIONS)
@click.pass_context
def split_compare(ctx, **kw):
    """Fit both sides of a period split and compare parameters."""
    kw = _with_config(ctx, kw)
    entries = []
    for label, dataset in _build_datasets(kw):
        first_data, second_data = split_period(dataset, kw["cutoff"])
        entries.append(
            reports.SplitEntry(
                label,
                _fit_one(label, first_data, kw),
                _fit_one(label, second_data, kw),
            )
        )
    _emit(reports.split_compare_report(kw["cutoff"], entries), kw)
    ok = all(e.first.fit.converged and e.second.fit.converged for e in entries)
    return 0 if ok else 3


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_ALIGN_OPTION
@click.option("--fit-start", type=ISO_DATE, default=None,
              help="First date of the estimation sample (default: start of data).")
@click.option("--fit-end", type=ISO_DATE, required=True,
              help="Last date of the estimation sample.")
@click.option("--forecast-end", type=ISO_DATE, required=True,
              help="Last date of the forecast window.")
@click.option("--mode", type=click.Choice(["static", "dynamic"]), default="static",
              show_default=True)
@click.option("--theil-on", type=click.Choice(["variance", "mean"]), default="variance",
              show_default=True, help="Pair scored by the Theil coefficient.")
@_add_options(_FIT_OPTIONS)
@_add_options(_OUTPUT_OPTIONS)
@_PLOT_OPTION
@click.pass_context
def forecast(ctx, **kw):
    """Fit on the pre-split sample, forecast the window, report RMSE/MAE/Theil-U."""
    kw = _with_config(ctx, kw)
    if kw["fit_end"] >= kw["forecast_end"]:
        raise click.UsageError("--forecast-end must lie after --fit-end")
    entries = []
    window = (kw["fit_end"] + dt.timedelta(days=1), kw["forecast_end"])
    for label, dataset in _build_datasets(kw):
        fit_data = restrict(dataset, kw["fit_start"], kw["fit_end"])
        entry = _fit_one(label, fit_data, kw)
        forecaster = forecast_static if kw["mode"] == "static" else forecast_dynamic
        result = forecaster(entry.fit, dataset, window)
        evaluation = evaluate(result, dataset, theil_on=kw["theil_on"])
        entries.append((label, dataset, entry.fit, result, evaluation))
    report = reports.forecast_report(
        [reports.ForecastEntry(label, result, evaluation)
         for label, _, _, result, evaluation in entries]
    )
    _emit(report, kw)
    if kw["out"]:
        for label, dataset, fitted, result, _ in entries:
            idx = {d: i for i, d in enumerate(dataset.dates)}
            rows = np.asarray([idx[d] for d in result.dates], dtype=int)
            realized = dataset.returns[rows]
            band = 2.0 * np.sqrt(result.variance_forecast)
            csvio.write_dataset_csv(
                _figure_path(kw["out"], label, "path.csv"),
                result.dates,
                {
                    "actual_return": realized,
                    "actual_proxy": realized**2,
                    "mean_forecast": result.mean_forecast,
                    "variance_forecast": result.variance_forecast,
                    "band_low": result.mean_forecast - band,
                    "band_high": result.mean_forecast + band,
                },
            )
            if kw["do_plot"]:
                plots.save_forecast_figure(
                    _figure_path(kw["out"], label, "forecast.png"),
                    result.dates,
                    realized,
                    result.mean_forecast,
                    result.variance_forecast,
                    label,
                )
    return 0 if all(e[2].converged for e in entries) else 3


@cli.command("simulate")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--length", type=int, default=500, show_default=True)
@click.option("--burn-in", type=int, default=500, show_default=True)
@click.option("--alpha0", type=float, default=0.0, show_default=True)
@click.option("--alpha1", type=float, default=0.0, show_default=True)
@click.option("--beta0", type=float, default=0.1, show_default=True)
@click.option("--beta1", type=float, default=0.8, show_default=True)
@click.option("--beta2", type=float, default=0.1, show_default=True)
@click.option("--exog-mode", type=click.Choice(["zeros", "normal"]), default="zeros",
              show_default=True)
@click.option("--exog-mean", type=float, default=0.0, show_default=True)
@click.option("--exog-std", type=float, default=1.0, show_default=True)
@click.option("--start-date", type=ISO_DATE, default=dt.date(2020, 1, 1),
              show_default=True)
@click.option("--base-level", type=float, default=100.0, show_default=True,
              help="Price level on the day before the first simulated return.")
@click.option("--out-rates", type=click.Path(), required=True,
              help="Quote CSV to write (ingestible by the other commands).")
@click.option("--out-cases", type=click.Path(), required=True,
              help="Count CSV to write (first differences recover the exog).")
@click.option("--out-dataset", type=click.Path(), default=None,
              help="Optional reference CSV with returns, exog and true variance.")
@click.option("--config", type=click.Path(), default=None)
@click.pass_context
def simulate_cmd(ctx, **kw):
    """Generate a synthetic dataset and write it in the ingestion schema."""
    kw = _with_config(ctx, kw)
    params = GarchParams(kw["alpha0"], kw["alpha1"], kw["beta0"], kw["beta1"], kw["beta2"])
    config = SimConfig(
        params=params,
        length=kw["length"],
        seed=kw["seed"],
        burn_in=kw["burn_in"],
        exog_mode=kw["exog_mode"],
        exog_mean=kw["exog_mean"],
        exog_std=kw["exog_std"],
        start_date=kw["start_date"],
    )
    result = simulate(config)
    returns = DatedSeries(result.data.dates, result.data.returns, "sim")
    exog = DatedSeries(result.data.dates, result.data.exog, "sim_cases")
    csvio.write_quote_csv(kw["out_rates"], levels_from_returns(returns, base=kw["base_level"]))
    csvio.write_cases_csv(kw["out_cases"], counts_from_increments(exog))
    if kw["out_dataset"]:
        csvio.write_dataset_csv(
            kw["out_dataset"],
            result.data.dates,
            {
                "return": result.data.returns,
                "exog": result.data.exog,
                "true_variance": result.variance.values,
            },
        )
    click.echo(
        f"wrote {kw['length']} observations to {kw['out_rates']} and {kw['out_cases']} "
        f"(seed {kw['seed']})"
    )
    return 0


def main(argv=None) -> int:
    """Run the CLI, mapping domain errors onto the documented exit codes."""
    try:
        result = cli.main(args=argv, standalone_mode=False)
        return int(result) if isinstance(result, int) else 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.Abort:
        return 1
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 1
    except NumericalError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return 3
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except FxvolError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
