"""GARCH(1,1)-X data generator used as an independent estimation oracle.

Standard-normal innovations come from the counter-based Philox generator
mapped through the inverse normal CDF (scipy's ndtri), so a given seed
reproduces the same draws bit-for-bit across platforms.  The variance path
starts at the unconditional variance and a configurable burn-in washes out
that initialization.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.special import ndtri

from .errors import DataError, ParameterError
from .garch import GarchParams, unconditional_variance
from .timeseries import AlignedDataset, DatedSeries

EXOG_MODES = ("zeros", "normal", "supplied")
DEFAULT_BURN_IN = 500


@dataclass(frozen=True)
class SimConfig:
    params: GarchParams
    length: int
    seed: int
    burn_in: int = DEFAULT_BURN_IN
    exog_mode: str = "zeros"
    exog_mean: float = 0.0
    exog_std: float = 1.0
    exog_values: np.ndarray | None = None
    start_date: dt.date = dt.date(2020, 1, 1)

    def __post_init__(self):
        if self.length < 1:
            raise ParameterError(f"length must be >= 1, got {self.length}")
        if self.burn_in < 0:
            raise ParameterError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.exog_mode not in EXOG_MODES:
            raise ParameterError(
                f"unknown exog mode {self.exog_mode!r}; choose from {EXOG_MODES}"
            )
        if self.exog_mode == "supplied":
            values = np.asarray(self.exog_values, dtype=float)
            if values.shape != (self.length,):
                raise ParameterError(
                    f"supplied exog needs shape ({self.length},), got {values.shape}"
                )
            object.__setattr__(self, "exog_values", values)
        if self.exog_mode == "normal" and self.exog_std < 0:
            raise ParameterError("exog_std must be >= 0")


@dataclass(frozen=True)
class SimResult:
    """Simulated dataset plus the true variance and shock paths behind it."""

    data: AlignedDataset
    variance: DatedSeries
    residuals: DatedSeries


def simulate(config: SimConfig) -> SimResult:
    """Generate a dataset from the model; identical seeds give identical output."""
    p = config.params
    total = config.burn_in + config.length
    rng = Generator(Philox(config.seed))
    z = ndtri(rng.random(total))

    if config.exog_mode == "zeros":
        x = np.zeros(total)
    elif config.exog_mode == "normal":
        x = config.exog_mean + config.exog_std * ndtri(rng.random(total))
    else:
        x = np.concatenate([np.zeros(config.burn_in), config.exog_values])

    h = np.empty(total)
    eps = np.empty(total)
    ht = unconditional_variance(p)
    for t in range(total):
        h[t] = ht
        eps[t] = np.sqrt(ht) * z[t]
        ht = p.beta0 + p.beta1 * ht + p.beta2 * eps[t] ** 2
    returns = p.alpha0 + p.alpha1 * x + eps

    keep = slice(config.burn_in, total)
    dates = tuple(
        config.start_date + dt.timedelta(days=i) for i in range(config.length)
    )
    data = AlignedDataset(dates, returns[keep], x[keep])
    return SimResult(
        data=data,
        variance=DatedSeries(dates, h[keep], "true_variance"),
        residuals=DatedSeries(dates, eps[keep], "shocks"),
    )


def levels_from_returns(
    returns: DatedSeries, base_date: dt.date | None = None, base: float = 100.0
) -> DatedSeries:
    """Price-level path whose log returns equal the given series.

    Prepends a base observation one day before the first return date (or at
    ``base_date``), so feeding the result back through a log-return
    transform recovers the input.
    """
    if base <= 0:
        raise DataError("base level must be positive")
    if base_date is None:
        base_date = returns.dates[0] - dt.timedelta(days=1)
    elif base_date >= returns.dates[0]:
        raise DataError("base date must precede the first return date")
    levels = base * np.exp(np.concatenate(([0.0], np.cumsum(returns.values))))
    return DatedSeries((base_date, *returns.dates), levels, returns.label)


def counts_from_increments(
    increments: DatedSeries, base_date: dt.date | None = None, base: float = 0.0
) -> DatedSeries:
    """Cumulative path whose first differences equal the given series."""
    if base_date is None:
        base_date = increments.dates[0] - dt.timedelta(days=1)
    elif base_date >= increments.dates[0]:
        raise DataError("base date must precede the first increment date")
    totals = base + np.concatenate(([0.0], np.cumsum(increments.values)))
    return DatedSeries((base_date, *increments.dates), totals, increments.label)
