import datetime as dt
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fxvol import AlignedDataset, DatedSeries, GarchFit, GarchParams, SimConfig, simulate
from fxvol.garch import variance_recursion

START = dt.date(2020, 3, 9)


def make_dates(n, start=START, step=1):
    return tuple(start + dt.timedelta(days=i * step) for i in range(n))


def make_series(values, start=START, label="series", step=1):
    return DatedSeries(make_dates(len(values), start, step), values, label)


def make_dataset(returns, exog, start=START):
    return AlignedDataset(make_dates(len(returns), start), returns, exog)


def manual_fit(params, data, h0=1.0):
    """Assemble a GarchFit directly from known parameters (no optimization)."""
    eps = data.returns - params.alpha0 - params.alpha1 * data.exog
    h = variance_recursion(params, eps, h0)[: len(data)]
    ones = np.ones(5)
    return GarchFit(
        params=params,
        std_errors=ones,
        z_stats=params.as_array() / ones,
        p_values=np.full(5, 0.5),
        log_likelihood=0.0,
        cond_variance=DatedSeries(data.dates, h, "cond_variance"),
        residuals=DatedSeries(data.dates, eps, "residuals"),
        std_residuals=DatedSeries(data.dates, eps / np.sqrt(h), "std_residuals"),
        converged=True,
        iterations=0,
        h0=h0,
    )


@pytest.fixture(scope="session")
def recovery_truth():
    return GarchParams(alpha0=0.0, alpha1=0.5, beta0=0.1, beta1=0.8, beta2=0.1)


@pytest.fixture(scope="session")
def sim_5000(recovery_truth):
    """One large simulated dataset shared by the slower estimation tests."""
    return simulate(
        SimConfig(params=recovery_truth, length=5000, seed=42, exog_mode="normal")
    )
