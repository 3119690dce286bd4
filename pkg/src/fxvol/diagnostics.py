"""Residual diagnostics: Ljung-Box serial correlation and the ARCH-LM test.

Both are intended for the standardized residuals of a fitted model; default
lag orders are 10 for Ljung-Box and 5 for ARCH-LM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import DataError
from .ols import ols

LJUNG_BOX_LAGS = 10
ARCH_LM_LAGS = 5


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    lags: int
    verdict_at_5pct: str  # "reject" | "fail-to-reject"


def _finish(statistic: float, lags: int) -> TestResult:
    p = float(chi2.sf(statistic, lags))
    verdict = "reject" if p < 0.05 else "fail-to-reject"
    return TestResult(statistic=float(statistic), p_value=p, lags=lags, verdict_at_5pct=verdict)


def _as_vector(series, test: str) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise DataError(f"{test} needs a one-dimensional series")
    if np.ptp(x) == 0.0:
        raise DataError(f"{test}: degenerate series, all values equal")
    return x


def ljung_box(series, lags: int = LJUNG_BOX_LAGS) -> TestResult:
    """Ljung-Box Q test for serial correlation up to the given lag order.

    Q = n (n + 2) * sum_k acf_k^2 / (n - k), chi-squared with ``lags``
    degrees of freedom under the white-noise null.
    """
    x = _as_vector(series, "Ljung-Box")
    n = len(x)
    if lags < 1:
        raise DataError(f"lag order must be >= 1, got {lags}")
    if lags >= n:
        raise DataError(f"lag order {lags} must be below the sample size {n}")
    dev = x - x.mean()
    denom = float(dev @ dev)
    q = 0.0
    for k in range(1, lags + 1):
        acf_k = float(dev[k:] @ dev[:-k]) / denom
        q += acf_k**2 / (n - k)
    q *= n * (n + 2.0)
    return _finish(q, lags)


def arch_lm(series, lags: int = ARCH_LM_LAGS) -> TestResult:
    """Engle's LM test for ARCH effects.

    Regresses the squared series on a constant and its own ``lags`` lags;
    the statistic is n * R^2 of that regression, chi-squared with ``lags``
    degrees of freedom under the no-ARCH null.
    """
    x = _as_vector(series, "ARCH-LM")
    n = len(x)
    if lags < 1:
        raise DataError(f"lag order must be >= 1, got {lags}")
    if n <= 2 * lags:
        raise DataError(f"ARCH-LM with {lags} lags needs more than {2 * lags} observations")
    z = x**2
    if np.ptp(z) == 0.0:
        raise DataError("ARCH-LM: squared series is constant")
    # R^2 is invariant to scaling the squared series; normalizing keeps the
    # regression well conditioned regardless of the input's magnitude.
    z = z / z.std()
    y = z[lags:]
    rows = len(y)
    design = np.column_stack(
        [np.ones(rows)] + [z[lags - j : n - j] for j in range(1, lags + 1)]
    )
    res = ols(design, y)
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss <= 0:
        raise DataError("ARCH-LM: squared series is constant over the regression sample")
    r_squared = 1.0 - res.rss / tss
    return _finish(rows * r_squared, lags)
