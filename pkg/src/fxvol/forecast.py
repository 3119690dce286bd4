"""Static and dynamic variance forecasts and their evaluation metrics.

Static forecasts are sequences of one-step-ahead variances, each formed
from the realized previous residual and variance.  Dynamic forecasts use
the realized residual only for the first step; beyond it the unknown
squared shock is replaced by its conditional expectation, so the path
decays geometrically toward the unconditional variance at rate
beta1 + beta2.  Exogenous values over the window are observed data and are
used as given in the mean forecast alpha0 + alpha1 * x_t.

Forecast accuracy is scored against the realized-variance proxy r_t^2 with
RMSE, MAE and the Theil inequality coefficient (scale-free, in [0, 1]).
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .garch import GarchFit, variance_recursion
from .timeseries import AlignedDataset

FORECAST_MODES = ("static", "dynamic")
THEIL_TARGETS = ("variance", "mean")


@dataclass(frozen=True)
class ForecastResult:
    dates: tuple[dt.date, ...]
    mean_forecast: np.ndarray
    variance_forecast: np.ndarray
    mode: str
    origin: dt.date

    def __post_init__(self):
        if self.mode not in FORECAST_MODES:
            raise DataError(f"mode must be one of {FORECAST_MODES}, got {self.mode!r}")
        if not self.dates:
            raise DataError("forecast needs at least one date")
        if self.dates[0] <= self.origin:
            raise DataError("forecast dates must lie strictly after the origin")
        variance = np.asarray(self.variance_forecast, dtype=float)
        if (variance <= 0).any() or not np.isfinite(variance).all():
            raise DataError("variance forecasts must be positive and finite")


@dataclass(frozen=True)
class ForecastEvaluation:
    rmse: float
    mae: float
    theil_u: float


def _window_indices(fit: GarchFit, data: AlignedDataset, window) -> tuple[np.ndarray, int]:
    """Indices of the window dates within ``data`` plus the fit's start index.

    The fit sample must be a contiguous slice of ``data`` and the window
    must begin at the first data date after the fit origin so that the
    recursion chains without gaps.
    """
    start, end = window
    if start > end:
        raise DataError(f"empty forecast window: {start} > {end}")
    dates = data.dates
    try:
        fit_start = dates.index(fit.dates[0])
        origin_idx = dates.index(fit.dates[-1])
    except ValueError:
        raise DataError("forecast data does not contain the fit's estimation sample") from None
    if dates[fit_start : origin_idx + 1] != fit.dates:
        raise DataError("the fit's estimation sample is not a contiguous slice of the data")
    idx = [i for i, d in enumerate(dates) if start <= d <= end]
    if not idx:
        raise DataError(
            f"forecast window {start.isoformat()}..{end.isoformat()} is not covered by the data"
        )
    if idx[0] != origin_idx + 1:
        raise DataError(
            "forecast window must start at the first date after the estimation "
            f"sample (expected {dates[origin_idx + 1].isoformat() if origin_idx + 1 < len(dates) else 'none'}, "
            f"got {dates[idx[0]].isoformat()})"
        )
    return np.asarray(idx, dtype=int), fit_start


def forecast_static(fit: GarchFit, data: AlignedDataset, window) -> ForecastResult:
    """One-step-ahead forecasts over ``window`` = (first_date, last_date).

    Each variance in the window conditions on the realized history through
    the previous day, so the path equals the model's filtered variances
    recomputed over the extended sample.
    """
    idx, fit_start = _window_indices(fit, data, window)
    p = fit.params
    eps = data.returns - p.alpha0 - p.alpha1 * data.exog
    path = variance_recursion(p, eps[fit_start : idx[-1] + 1], fit.h0)
    return ForecastResult(
        dates=tuple(data.dates[i] for i in idx),
        mean_forecast=p.alpha0 + p.alpha1 * data.exog[idx],
        variance_forecast=path[idx - fit_start],
        mode="static",
        origin=fit.dates[-1],
    )


def forecast_dynamic(fit: GarchFit, data: AlignedDataset, window) -> ForecastResult:
    """Multi-step forecasts over ``window`` from the end of the fit sample.

    The first step uses the realized last in-sample residual; thereafter
    h_{t+1} = beta0 + (beta1 + beta2) h_t, which converges to the
    unconditional variance.
    """
    idx, _ = _window_indices(fit, data, window)
    p = fit.params
    last_h = fit.cond_variance.values[-1]
    last_eps = fit.residuals.values[-1]
    persistence = p.beta1 + p.beta2
    variances = np.empty(len(idx))
    h = p.beta0 + p.beta1 * last_h + p.beta2 * last_eps**2
    for k in range(len(idx)):
        variances[k] = h
        h = p.beta0 + persistence * h
    return ForecastResult(
        dates=tuple(data.dates[i] for i in idx),
        mean_forecast=p.alpha0 + p.alpha1 * data.exog[idx],
        variance_forecast=variances,
        mode="dynamic",
        origin=fit.dates[-1],
    )


def _paired(actual, forecast, what: str) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.ndim != 1:
        raise DataError(f"{what} needs two equally long vectors, got {a.shape} and {f.shape}")
    if a.size == 0:
        raise DataError(f"{what} needs at least one observation")
    return a, f


def rmse(actual_proxy, forecast_var) -> float:
    """Root mean squared error between proxy and forecast vectors."""
    a, f = _paired(actual_proxy, forecast_var, "RMSE")
    return float(np.sqrt(np.mean((a - f) ** 2)))


def mae(actual_proxy, forecast_var) -> float:
    """Mean absolute error between proxy and forecast vectors."""
    a, f = _paired(actual_proxy, forecast_var, "MAE")
    return float(np.mean(np.abs(a - f)))


def theil_u(x, y) -> float:
    """Theil inequality coefficient: rms(x - y) / (rms(x) + rms(y)), in [0, 1]."""
    a, f = _paired(x, y, "Theil U")
    rms_a = np.sqrt(np.mean(a**2))
    rms_f = np.sqrt(np.mean(f**2))
    if rms_a == 0.0 and rms_f == 0.0:
        raise DataError("Theil U is undefined when both vectors are zero")
    return float(np.sqrt(np.mean((a - f) ** 2)) / (rms_a + rms_f))


def evaluate(forecast: ForecastResult, data: AlignedDataset, theil_on: str = "variance") -> ForecastEvaluation:
    """Score a forecast against the realized-variance proxy r_t^2.

    ``theil_on`` selects the Theil-U pair: the (proxy, variance forecast)
    vectors (default, consistent with RMSE/MAE) or the realized returns
    against the mean forecast.
    """
    if theil_on not in THEIL_TARGETS:
        raise DataError(f"theil_on must be one of {THEIL_TARGETS}, got {theil_on!r}")
    lookup = {d: i for i, d in enumerate(data.dates)}
    missing = [d for d in forecast.dates if d not in lookup]
    if missing:
        raise DataError(
            f"forecast dates not covered by the data, first missing {missing[0].isoformat()}"
        )
    idx = np.asarray([lookup[d] for d in forecast.dates], dtype=int)
    returns = data.returns[idx]
    proxy = returns**2
    if theil_on == "variance":
        theil = theil_u(proxy, forecast.variance_forecast)
    else:
        theil = theil_u(returns, forecast.mean_forecast)
    return ForecastEvaluation(
        rmse=rmse(proxy, forecast.variance_forecast),
        mae=mae(proxy, forecast.variance_forecast),
        theil_u=theil,
    )
