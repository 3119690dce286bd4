"""Summary statistics and the Jarque-Bera normality test.

Moment conventions follow common econometrics-package practice: skewness
and kurtosis use biased (1/n) central moments, kurtosis is reported raw
(Gaussian = 3, not excess), and the standard deviation uses the n-1
denominator.  Under these conventions the Jarque-Bera statistic is exactly
recoverable from the reported skewness, kurtosis and n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import DataError
from .timeseries import DatedSeries


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    median: float
    maximum: float
    minimum: float
    std_dev: float
    skewness: float
    kurtosis: float
    jarque_bera: float
    jb_p_value: float


def jarque_bera(n: int, skewness: float, kurtosis: float) -> tuple[float, float]:
    """Jarque-Bera statistic and its chi-squared(2) upper-tail p-value.

    statistic = (n/6) * (S^2 + (K-3)^2 / 4) with raw kurtosis K.
    """
    if n < 4:
        raise DataError(f"Jarque-Bera needs n >= 4, got {n}")
    stat = (n / 6.0) * (skewness**2 + (kurtosis - 3.0) ** 2 / 4.0)
    return stat, float(chi2.sf(stat, 2))


def summary_stats(series: DatedSeries) -> SummaryStats:
    """Descriptive statistics of a series, including the Jarque-Bera test."""
    x = series.values
    n = len(x)
    if n < 4:
        raise DataError(f"summary statistics need at least 4 observations, got {n}")
    mean = float(np.mean(x))
    dev = x - mean
    m2 = float(np.mean(dev**2))
    if m2 == 0.0:
        raise DataError(f"degenerate series {series.label!r}: all values equal")
    skew = float(np.mean(dev**3)) / m2**1.5
    kurt = float(np.mean(dev**4)) / m2**2
    jb, jb_p = jarque_bera(n, skew, kurt)
    return SummaryStats(
        n=n,
        mean=mean,
        median=float(np.median(x)),
        maximum=float(np.max(x)),
        minimum=float(np.min(x)),
        std_dev=float(np.sqrt(np.sum(dev**2) / (n - 1))),
        skewness=skew,
        kurtosis=kurt,
        jarque_bera=jb,
        jb_p_value=jb_p,
    )
