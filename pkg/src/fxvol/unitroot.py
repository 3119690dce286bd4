"""Augmented Dickey-Fuller and Phillips-Perron unit-root tests.

Both tests share the same null hypothesis (the series has a unit root) and
the same asymptotic distribution, so rejecting implies stationarity.
P-values come from the MacKinnon (1994) response-surface regressions and
finite-sample critical values from the MacKinnon (2010) tables, both for
the univariate (single-series) case.

The ADF regression is

    dy_t = rho * y_{t-1} + sum_{j=1..k} c_j * dy_{t-j} + deterministics + e_t

with the test statistic equal to the t-ratio on ``rho``.  The PP test runs
the same regression with zero augmentation lags and corrects the t-ratio
nonparametrically with a Bartlett-kernel (Newey-West) long-run variance
estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import ConfigError, DataError
from .ols import ols
from .timeseries import DatedSeries

DETERMINISTICS = ("none", "constant", "constant+trend")
LAG_SELECTIONS = ("fixed", "aic", "bic")

# MacKinnon (2010) response-surface coefficients for finite-sample critical
# values: cv(level) = b0 + b1/n + b2/n^2 + b3/n^3, univariate case.
_CRIT = {
    "none": {
        "1%": (-2.56574, -2.2358, -3.627, 0.0),
        "5%": (-1.94100, -0.2686, -3.365, 31.223),
        "10%": (-1.61682, 0.2656, -2.714, 25.364),
    },
    "constant": {
        "1%": (-3.43035, -6.5393, -16.786, -79.433),
        "5%": (-2.86154, -2.8903, -4.234, -40.040),
        "10%": (-2.56677, -1.5384, -2.809, 0.0),
    },
    "constant+trend": {
        "1%": (-3.95877, -9.0531, -28.428, -134.155),
        "5%": (-3.41049, -4.3904, -9.036, -45.374),
        "10%": (-3.12705, -2.5856, -3.925, -22.380),
    },
}

# MacKinnon (1994) p-value regressions: p = Phi(polynomial(stat)).  The
# cubic ("large-p") branch applies above tau_star, the quadratic
# ("small-p") branch below; outside [tau_min, tau_max] the p-value saturates.
_PVAL = {
    "none": {
        "tau_star": -1.04,
        "tau_min": -19.04,
        "tau_max": np.inf,
        "small_p": (0.6344, 1.2378, 0.032496),
        "large_p": (0.4797, 0.93557, -0.06999, 0.033066),
    },
    "constant": {
        "tau_star": -1.61,
        "tau_min": -18.83,
        "tau_max": 2.74,
        "small_p": (2.1659, 1.4412, 0.038269),
        "large_p": (1.7339, 0.93202, -0.12745, -0.010368),
    },
    "constant+trend": {
        "tau_star": -2.89,
        "tau_min": -16.18,
        "tau_max": 0.7,
        "small_p": (3.2512, 1.6047, 0.049588),
        "large_p": (2.5261, 0.61654, -0.37956, -0.060285),
    },
}


@dataclass(frozen=True)
class UnitRootResult:
    statistic: float
    p_value: float
    lags_used: int
    deterministic: str
    critical_values: dict


def mackinnon_pvalue(stat: float, deterministic: str = "constant") -> float:
    """Approximate asymptotic p-value of a Dickey-Fuller tau statistic."""
    tab = _PVAL[_check_deterministic(deterministic)]
    if stat <= tab["tau_min"]:
        return 0.0
    if stat >= tab["tau_max"]:
        return 1.0
    coeffs = tab["small_p"] if stat <= tab["tau_star"] else tab["large_p"]
    return float(ndtr(np.polyval(coeffs[::-1], stat)))


def mackinnon_crit(nobs: int, deterministic: str = "constant") -> dict:
    """Finite-sample 1%/5%/10% critical values for a given regression size."""
    tab = _CRIT[_check_deterministic(deterministic)]
    return {
        level: float(np.polyval(coeffs[::-1], 1.0 / nobs))
        for level, coeffs in tab.items()
    }


def _check_deterministic(deterministic: str) -> str:
    if deterministic not in DETERMINISTICS:
        raise ConfigError(
            f"unknown deterministic term {deterministic!r}; choose from {DETERMINISTICS}"
        )
    return deterministic


def _values(series) -> np.ndarray:
    if isinstance(series, DatedSeries):
        return series.values
    return np.asarray(series, dtype=float)


def _det_columns(nrows: int, offset: int, deterministic: str) -> list[np.ndarray]:
    cols = []
    if deterministic in ("constant", "constant+trend"):
        cols.append(np.ones(nrows))
    if deterministic == "constant+trend":
        cols.append(np.arange(offset, offset + nrows, dtype=float))
    return cols


def schwert_max_lags(nobs: int) -> int:
    """Schwert's rule of thumb for the maximum ADF augmentation lag."""
    return int(np.floor(12.0 * (nobs / 100.0) ** 0.25))


def default_bandwidth(nobs: int) -> int:
    """Default Newey-West bandwidth for the PP correction."""
    return int(np.floor(4.0 * (nobs / 100.0) ** (2.0 / 9.0)))


def adf_test(
    series,
    max_lags: int | None = None,
    deterministic: str = "constant",
    lag_selection: str = "bic",
) -> UnitRootResult:
    """Augmented Dickey-Fuller test.

    ``max_lags`` defaults to the Schwert rule.  Under ``aic``/``bic`` the
    augmentation order is chosen by minimizing the criterion over a common
    estimation sample, then the regression is re-run at the chosen order on
    the full usable sample; ``fixed`` uses ``max_lags`` directly.
    """
    deterministic = _check_deterministic(deterministic)
    if lag_selection not in LAG_SELECTIONS:
        raise ConfigError(
            f"unknown lag selection {lag_selection!r}; choose from {LAG_SELECTIONS}"
        )
    y = _values(series)
    nobs = len(y)
    if max_lags is None:
        max_lags = schwert_max_lags(nobs)
    if max_lags < 0:
        raise ConfigError("max_lags must be >= 0")
    if nobs < 25 + max_lags:
        raise DataError(
            f"series too short for ADF: {nobs} observations with max_lags={max_lags} "
            f"(need at least {25 + max_lags})"
        )
    if np.ptp(y) == 0.0:
        raise DataError("degenerate series: all values equal")

    dy = np.diff(y)
    ylag = y[:-1]

    if lag_selection == "fixed":
        k = max_lags
    else:
        k = _select_lags(dy, ylag, max_lags, deterministic, lag_selection)

    stat, nreg = _df_regression(dy, ylag, k, deterministic)
    return UnitRootResult(
        statistic=stat,
        p_value=mackinnon_pvalue(stat, deterministic),
        lags_used=k,
        deterministic=deterministic,
        critical_values=mackinnon_crit(nreg, deterministic),
    )


def _df_regression(dy, ylag, k, deterministic):
    """t-ratio on y_{t-1} in the order-k augmented regression; returns (t, nobs)."""
    rows = len(dy) - k
    if rows <= k + 2:
        raise DataError("lag order exhausts the sample")
    cols = [ylag[k:]]
    for j in range(1, k + 1):
        cols.append(dy[k - j : len(dy) - j])
    cols.extend(_det_columns(rows, k, deterministic))
    res = ols(np.column_stack(cols), dy[k:])
    return float(res.t_stats[0]), res.nobs


def _select_lags(dy, ylag, max_lags, deterministic, criterion):
    """Information-criterion lag choice over a common sample of regressions."""
    rows = len(dy) - max_lags
    if rows <= max_lags + 3:
        raise DataError("lag selection exhausts the sample")
    y_common = dy[max_lags:]
    base = [ylag[max_lags:]]
    lag_cols = [dy[max_lags - j : len(dy) - j] for j in range(1, max_lags + 1)]
    det = _det_columns(rows, max_lags, deterministic)
    best_k, best_ic = 0, np.inf
    for k in range(max_lags + 1):
        design = np.column_stack(base + lag_cols[:k] + det)
        res = ols(design, y_common)
        loglik_part = rows * np.log(res.rss / rows)
        nparams = res.nparams
        if criterion == "aic":
            ic = loglik_part + 2.0 * nparams
        else:
            ic = loglik_part + nparams * np.log(rows)
        if ic < best_ic:
            best_k, best_ic = k, ic
    return best_k


def pp_test(
    series,
    deterministic: str = "constant",
    bandwidth: int | None = None,
) -> UnitRootResult:
    """Phillips-Perron test (tau variant).

    The Dickey-Fuller regression is run with no augmentation lags and the
    t-ratio corrected with a Bartlett-kernel long-run variance estimate of
    the residuals; ``bandwidth`` defaults to floor(4 * (n/100)^(2/9)).
    """
    deterministic = _check_deterministic(deterministic)
    y = _values(series)
    nobs = len(y)
    if nobs < 25:
        raise DataError(f"series too short for PP: {nobs} observations (need at least 25)")
    if np.ptp(y) == 0.0:
        raise DataError("degenerate series: all values equal")

    dy = np.diff(y)
    ylag = y[:-1]
    n = len(dy)
    if bandwidth is None:
        bandwidth = default_bandwidth(n)
    if bandwidth < 0:
        raise ConfigError("bandwidth must be >= 0")
    if bandwidth >= n:
        raise DataError(f"bandwidth {bandwidth} must be below the sample size {n}")

    design = np.column_stack([ylag] + _det_columns(n, 0, deterministic))
    res = ols(design, dy)
    t_rho = float(res.t_stats[0])
    se_rho = float(res.std_errors[0])
    u = res.residuals

    gamma0 = res.rss / n
    lam2 = gamma0
    for j in range(1, bandwidth + 1):
        weight = 1.0 - j / (bandwidth + 1.0)
        lam2 += 2.0 * weight * float(u[j:] @ u[:-j]) / n
    if lam2 <= 0:
        raise DataError("long-run variance estimate is not positive")
    s2 = res.rss / (n - res.nparams)

    stat = np.sqrt(gamma0 / lam2) * t_rho - 0.5 * (lam2 - gamma0) / np.sqrt(lam2) * (
        n * se_rho / np.sqrt(s2)
    )
    return UnitRootResult(
        statistic=float(stat),
        p_value=mackinnon_pvalue(float(stat), deterministic),
        lags_used=bandwidth,
        deterministic=deterministic,
        critical_values=mackinnon_crit(res.nobs, deterministic),
    )
