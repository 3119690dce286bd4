"""Matplotlib figures rendered next to report files.

Figures are written as PNG with the Agg backend so the report path works
headless.  The forecast figure mirrors the plottable CSV: realized returns
inside the +/- 2 sqrt(h) band on top, the realized-variance proxy against
the forecast variance below.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates
import matplotlib.pyplot as plt
import numpy as np

DPI = 120


def _date_axis(ax):
    locator = mdates.AutoDateLocator()
    ax.xaxis.set_major_locator(locator)
    ax.xaxis.set_major_formatter(mdates.ConciseDateFormatter(locator))


def save_forecast_figure(path, dates, returns, mean_forecast, variance_forecast, label):
    """Two-panel forecast figure: returns with band, proxy vs forecast."""
    band = 2.0 * np.sqrt(variance_forecast)
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    top.plot(dates, returns, color="0.4", lw=1.0, label="realized return")
    top.plot(dates, mean_forecast, color="tab:blue", lw=1.2, label="mean forecast")
    top.fill_between(
        dates,
        mean_forecast - band,
        mean_forecast + band,
        color="tab:blue",
        alpha=0.15,
        label="forecast +/- 2 s.d.",
    )
    top.set_ylabel("return")
    top.legend(loc="upper left", fontsize=8)
    top.set_title(f"{label}: variance forecast")

    bottom.plot(dates, returns**2, color="0.4", lw=1.0, label="squared return (proxy)")
    bottom.plot(dates, variance_forecast, color="tab:red", lw=1.2, label="forecast variance")
    bottom.set_ylabel("variance")
    bottom.legend(loc="upper left", fontsize=8)
    _date_axis(bottom)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_variance_figure(path, dates, returns, cond_variance, label):
    """In-sample conditional variance below the return series."""
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    top.plot(dates, returns, color="0.3", lw=0.8)
    top.set_ylabel("return")
    top.set_title(f"{label}: fitted conditional variance")
    bottom.plot(dates, cond_variance, color="tab:red", lw=1.2)
    bottom.set_ylabel("conditional variance")
    _date_axis(bottom)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
