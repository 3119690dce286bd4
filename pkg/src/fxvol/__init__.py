"""fxvol: volatility modeling of return series with an exogenous mean regressor.

The toolkit covers the full pipeline: CSV ingestion of quote and count
files, return/difference transforms, summary statistics with Jarque-Bera,
ADF/PP unit-root tests, GARCH(1,1)-X maximum-likelihood estimation with
residual diagnostics, static/dynamic variance forecasting with RMSE, MAE
and Theil-U evaluation, a two-period structural comparison, and a seeded
simulator that serves as the estimation oracle.
"""

from .descriptive import SummaryStats, jarque_bera, summary_stats
from .diagnostics import TestResult, arch_lm, ljung_box
from .errors import (
    ConfigError,
    ConvergenceWarning,
    DataError,
    FxvolError,
    NumericalError,
    ParameterError,
)
from .forecast import (
    ForecastEvaluation,
    ForecastResult,
    evaluate,
    forecast_dynamic,
    forecast_static,
    mae,
    rmse,
    theil_u,
)
from .garch import (
    FitOptions,
    GarchFit,
    GarchParams,
    fit,
    log_likelihood,
    numerical_hessian,
    unconditional_variance,
    variance_recursion,
)
from .ols import OlsResult, ols
from .simulate import SimConfig, SimResult, simulate
from .timeseries import (
    AlignedDataset,
    DatedSeries,
    MIN_FIT_OBS,
    QuoteSeries,
    align,
    first_difference,
    log_returns,
    log_transform,
    mid_rate,
    restrict,
    split_period,
)
from .unitroot import UnitRootResult, adf_test, pp_test

__version__ = "0.1.0"

__all__ = [
    "AlignedDataset",
    "ConfigError",
    "ConvergenceWarning",
    "DataError",
    "DatedSeries",
    "FitOptions",
    "ForecastEvaluation",
    "ForecastResult",
    "FxvolError",
    "GarchFit",
    "GarchParams",
    "MIN_FIT_OBS",
    "NumericalError",
    "OlsResult",
    "ParameterError",
    "QuoteSeries",
    "SimConfig",
    "SimResult",
    "SummaryStats",
    "TestResult",
    "UnitRootResult",
    "adf_test",
    "align",
    "arch_lm",
    "evaluate",
    "first_difference",
    "fit",
    "forecast_dynamic",
    "forecast_static",
    "jarque_bera",
    "ljung_box",
    "log_likelihood",
    "log_returns",
    "log_transform",
    "mae",
    "mid_rate",
    "numerical_hessian",
    "ols",
    "pp_test",
    "restrict",
    "rmse",
    "simulate",
    "split_period",
    "summary_stats",
    "theil_u",
    "unconditional_variance",
    "variance_recursion",
]
