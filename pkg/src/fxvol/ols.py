"""Ordinary least squares via QR, shared by the unit-root and ARCH-LM tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DataError

#: Relative pivot threshold below which the design is treated as rank deficient.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class OlsResult:
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    residuals: np.ndarray
    rss: float
    nobs: int
    nparams: int


def ols(design, response) -> OlsResult:
    """Least-squares fit of ``response`` on the columns of ``design``.

    Standard errors use sigma^2 (X'X)^{-1} with sigma^2 = RSS / (n - k).
    A pivot of the QR factor below RANK_TOL (relative to the largest pivot)
    raises a rank-deficiency error.  t-statistics are NaN where the standard
    error is zero (exact fits).
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise DataError(f"response length {y.shape} does not match design rows {n}")
    if n <= k:
        raise DataError(f"need more rows than columns, got {n} rows for {k} columns")

    Q, R = np.linalg.qr(X)
    pivots = np.abs(np.diag(R))
    if pivots.min() < RANK_TOL * pivots.max():
        raise DataError("design matrix is rank deficient")
    coef = solve_triangular(R, Q.T @ y)
    residuals = y - X @ coef
    rss = float(residuals @ residuals)
    sigma2 = rss / (n - k)

    r_inv = solve_triangular(R, np.eye(k))
    xtx_inv_diag = np.sum(r_inv**2, axis=1)
    std_errors = np.sqrt(sigma2 * xtx_inv_diag)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(std_errors > 0, coef / std_errors, np.nan)
    return OlsResult(
        coefficients=coef,
        std_errors=std_errors,
        t_stats=t_stats,
        residuals=residuals,
        rss=rss,
        nobs=n,
        nparams=k,
    )
