"""GARCH(1,1) with an exogenous regressor in the conditional mean.

Model:

    r_t = alpha0 + alpha1 * x_t + eps_t,    eps_t | F_{t-1} ~ N(0, h_t)
    h_t = beta0 + beta1 * h_{t-1} + beta2 * eps_{t-1}^2

with beta0 > 0, beta1 >= 0, beta2 >= 0 and beta1 + beta2 < 1 (covariance
stationarity).  Estimation maximizes the Gaussian log-likelihood with a
Nelder-Mead search over an unconstrained reparameterization of the feasible
region, followed by one restart from the incumbent.  Standard errors come
from the numerical Hessian of the log-likelihood, mapped to the natural
parameter space by the delta method, with two-sided normal p-values.

The pre-sample variance h0 is fixed during optimization at the sample
variance of the mean-equation residuals under the starting parameters, and
the unknown pre-sample squared shock is backcast as h0 itself.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.special import expit, logit, ndtr

from .errors import ConvergenceWarning, DataError, NumericalError, ParameterError
from .timeseries import AlignedDataset, DatedSeries

PARAM_NAMES = ("alpha0", "alpha1", "beta0", "beta1", "beta2")

LOG_2PI = float(np.log(2.0 * np.pi))

#: beta1 + beta2 is kept strictly below this bound inside the optimizer.
PERSISTENCE_CAP = 1.0 - 1e-6


@dataclass(frozen=True)
class GarchParams:
    """The five model parameters. Invalid combinations fail at construction."""

    alpha0: float
    alpha1: float
    beta0: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.beta0 <= 0:
            raise ParameterError(f"beta0 must be > 0, got {self.beta0}")
        if self.beta1 < 0:
            raise ParameterError(f"beta1 must be >= 0, got {self.beta1}")
        if self.beta2 < 0:
            raise ParameterError(f"beta2 must be >= 0, got {self.beta2}")
        if self.beta1 + self.beta2 >= 1:
            raise ParameterError(
                "beta1 + beta2 must be < 1 for covariance stationarity, "
                f"got {self.beta1 + self.beta2}"
            )

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in PARAM_NAMES])


def unconditional_variance(params) -> float:
    """Long-run variance beta0 / (1 - beta1 - beta2)."""
    persistence = params.beta1 + params.beta2
    if persistence >= 1:
        raise ParameterError(
            f"non-stationary: beta1 + beta2 = {persistence} is not below 1"
        )
    return params.beta0 / (1.0 - persistence)


def variance_recursion(params, residuals, h0: float) -> np.ndarray:
    """Conditional-variance path driven by a shock sequence.

    With T residuals the result has T + 1 entries: entry t is the variance
    formed from the previous variance and the previous shock, the unknown
    pre-sample squared shock being backcast as h0 (so h[0] = beta0 +
    beta1*h0 + beta2*h0).  The final entry is the one-step-ahead variance
    after the last shock.
    """
    residuals = np.asarray(residuals, dtype=float)
    if residuals.size == 0:
        raise DataError("variance recursion needs at least one residual")
    if not np.isfinite(h0) or h0 <= 0:
        raise ParameterError(f"h0 must be a positive finite number, got {h0}")
    _validate_params(params)
    drive = params.beta0 + params.beta2 * np.concatenate(([h0], residuals**2))
    h, _ = lfilter([1.0], [1.0, -params.beta1], drive, zi=np.array([params.beta1 * h0]))
    return h


def _validate_params(params) -> None:
    beta0, beta1, beta2 = params.beta0, params.beta1, params.beta2
    if not (np.isfinite(beta0) and beta0 > 0):
        raise ParameterError(f"beta0 must be > 0, got {beta0}")
    if not (np.isfinite(beta1) and beta1 >= 0 and np.isfinite(beta2) and beta2 >= 0):
        raise ParameterError(f"beta1/beta2 must be >= 0, got {beta1}, {beta2}")
    if beta1 + beta2 >= 1:
        raise ParameterError(
            f"non-stationary: beta1 + beta2 = {beta1 + beta2} is not below 1"
        )


def log_likelihood_raw(params, returns, exog, h0: float) -> float:
    """Gaussian log-likelihood on plain vectors (no dataset-length floor)."""
    returns = np.asarray(returns, dtype=float)
    exog = np.asarray(exog, dtype=float)
    eps = returns - params.alpha0 - params.alpha1 * exog
    h = variance_recursion(params, eps, h0)[: len(eps)]
    bad = ~np.isfinite(h) | (h <= 0)
    if bad.any():
        raise NumericalError(
            f"non-finite conditional variance at index {int(np.flatnonzero(bad)[0])}"
        )
    ll = -0.5 * float(np.sum(LOG_2PI + np.log(h) + eps**2 / h))
    if not np.isfinite(ll):
        raise NumericalError("log-likelihood is not finite")
    return ll


def resolve_h0(params, returns, exog, policy="residual-variance") -> float:
    """Turn an h0 policy (a float or 'residual-variance') into a value."""
    if isinstance(policy, (int, float)):
        h0 = float(policy)
        if not np.isfinite(h0) or h0 <= 0:
            raise ParameterError(f"h0 must be positive, got {policy}")
        return h0
    if policy != "residual-variance":
        raise ParameterError(f"unknown h0 policy {policy!r}")
    eps = np.asarray(returns, float) - params.alpha0 - params.alpha1 * np.asarray(exog, float)
    h0 = float(np.var(eps))
    if h0 <= 0:
        raise DataError("degenerate data: mean-equation residuals have zero variance")
    return h0


def log_likelihood(params, data: AlignedDataset, h0_policy="residual-variance") -> float:
    """Gaussian log-likelihood of a dataset under the given parameters."""
    h0 = resolve_h0(params, data.returns, data.exog, h0_policy)
    return log_likelihood_raw(params, data.returns, data.exog, h0)


# --- unconstrained reparameterization ------------------------------------
#
# theta = (alpha0, alpha1, log beta0, logit(s / cap), logit(beta1 / s))
# where s = beta1 + beta2.  Any theta in R^5 maps to a valid parameter set
# with beta1 + beta2 < PERSISTENCE_CAP.


def transform_params(params) -> np.ndarray:
    """Natural parameters -> unconstrained optimizer coordinates."""
    s = params.beta1 + params.beta2
    if not 0 < s < PERSISTENCE_CAP:
        raise ParameterError(
            f"beta1 + beta2 must lie in (0, {PERSISTENCE_CAP}) to be transformed, got {s}"
        )
    if params.beta1 <= 0 or params.beta2 <= 0:
        raise ParameterError("transform needs strictly positive beta1 and beta2")
    return np.array(
        [
            params.alpha0,
            params.alpha1,
            np.log(params.beta0),
            logit(s / PERSISTENCE_CAP),
            logit(params.beta1 / s),
        ]
    )


def untransform_params(theta) -> GarchParams:
    """Unconstrained optimizer coordinates -> natural parameters."""
    theta = np.asarray(theta, dtype=float)
    s = PERSISTENCE_CAP * expit(theta[3])
    share = expit(theta[4])
    return GarchParams(
        alpha0=theta[0],
        alpha1=theta[1],
        beta0=np.exp(theta[2]),
        beta1=s * share,
        beta2=s * (1.0 - share),
    )


def _transform_jacobian(theta) -> np.ndarray:
    """d(natural params)/d(theta), evaluated analytically."""
    theta = np.asarray(theta, dtype=float)
    J = np.zeros((5, 5))
    J[0, 0] = 1.0
    J[1, 1] = 1.0
    J[2, 2] = np.exp(theta[2])
    sig3 = expit(theta[3])
    share = expit(theta[4])
    s = PERSISTENCE_CAP * sig3
    ds = s * (1.0 - sig3)
    dshare = share * (1.0 - share)
    J[3, 3] = share * ds
    J[3, 4] = s * dshare
    J[4, 3] = (1.0 - share) * ds
    J[4, 4] = -s * dshare
    return J


# --- numerical differentiation --------------------------------------------

_EPS = float(np.finfo(float).eps)


def numerical_hessian(objective, point, step=None) -> np.ndarray:
    """Symmetric matrix of central second differences of ``objective``.

    ``step`` may be None (relative step eps**0.25 per coordinate), a scalar
    relative step, or an array of absolute per-coordinate steps.  Any
    non-finite evaluation inside the stencil is an error.
    """
    x = np.asarray(point, dtype=float)
    n = x.size
    if step is None:
        steps = _EPS**0.25 * np.maximum(np.abs(x), 1.0)
    elif np.isscalar(step):
        steps = float(step) * np.maximum(np.abs(x), 1.0)
    else:
        steps = np.asarray(step, dtype=float)
        if steps.shape != x.shape:
            raise ParameterError("step array must match the point's shape")
    if (steps <= 0).any():
        raise ParameterError("steps must be positive")

    def ev(z):
        value = float(objective(z))
        if not np.isfinite(value):
            raise NumericalError(f"objective is not finite at stencil point {z}")
        return value

    f0 = ev(x)
    H = np.empty((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = steps[i]
        H[i, i] = (ev(x + ei) - 2.0 * f0 + ev(x - ei)) / steps[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = steps[j]
            H[i, j] = H[j, i] = (
                ev(x + ei + ej) - ev(x + ei - ej) - ev(x - ei + ej) + ev(x - ei - ej)
            ) / (4.0 * steps[i] * steps[j])
    return 0.5 * (H + H.T)


# --- fitting ----------------------------------------------------------------


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 2000
    f_tol: float = 1e-8
    x_tol: float = 1e-6
    rescale: bool = True
    h0: float | None = None
    start: GarchParams | None = None


DEFAULT_FIT_OPTIONS = FitOptions()


@dataclass(frozen=True)
class GarchFit:
    """Fitted parameters with inference and the filtered sample paths.

    Arrays are ordered like PARAM_NAMES.  ``cond_variance`` is the in-sample
    conditional-variance path, ``residuals`` the mean-equation residuals
    and ``std_residuals`` their standardized version; all three share the
    dataset's date index.
    """

    params: GarchParams
    std_errors: np.ndarray
    z_stats: np.ndarray
    p_values: np.ndarray
    log_likelihood: float
    cond_variance: DatedSeries
    residuals: DatedSeries
    std_residuals: DatedSeries
    converged: bool
    iterations: int
    h0: float

    @property
    def nobs(self) -> int:
        return len(self.residuals)

    @property
    def dates(self) -> tuple:
        return self.residuals.dates

    def param_dict(self) -> dict:
        """Per-parameter (estimate, std_error, z, p) rows keyed by name."""
        est = self.params.as_array()
        return {
            name: {
                "estimate": float(est[i]),
                "std_error": float(self.std_errors[i]),
                "z": float(self.z_stats[i]),
                "p": float(self.p_values[i]),
            }
            for i, name in enumerate(PARAM_NAMES)
        }


def starting_params(returns) -> GarchParams:
    """Default optimizer start: mean/variance-scaled with mild persistence."""
    returns = np.asarray(returns, dtype=float)
    var = float(np.var(returns))
    if var <= 0:
        raise DataError("degenerate data: returns are constant")
    return GarchParams(
        alpha0=float(np.mean(returns)),
        alpha1=0.0,
        beta0=0.1 * var,
        beta1=0.8,
        beta2=0.1,
    )


def _ols_start(returns, exog) -> GarchParams | None:
    """Alternative start with the mean equation pre-fit by least squares.

    The default start leaves alpha1 at zero, which inflates the early
    residuals and can drive the variance search onto the no-persistence
    boundary before the mean converges; seeding the mean from OLS avoids
    that trap.  Returns None when the regression is degenerate.
    """
    X = np.column_stack([np.ones(len(returns)), exog])
    coef, *_ = np.linalg.lstsq(X, returns, rcond=None)
    resid = returns - X @ coef
    var = float(np.var(resid))
    if var <= 0 or not np.isfinite(coef).all():
        return None
    return GarchParams(
        alpha0=float(coef[0]),
        alpha1=float(coef[1]),
        beta0=0.1 * var,
        beta1=0.8,
        beta2=0.1,
    )


def fit(data: AlignedDataset, options: FitOptions | None = None) -> GarchFit:
    """Maximum-likelihood GARCH(1,1)-X fit.

    Returns a GarchFit whose ``converged`` flag reflects the simplex
    termination criteria; non-convergence emits a ConvergenceWarning and is
    never silent.  Internally the data are scaled to unit variance for the
    search (exact, undone on output) unless ``options.rescale`` is False.
    """
    opts = options or DEFAULT_FIT_OPTIONS
    r = data.returns
    x = data.exog
    nobs = len(r)
    if np.ptp(r) == 0.0:
        raise DataError("degenerate data: returns are constant")
    if np.ptp(x) == 0.0:
        raise DataError(
            "exogenous regressor is constant; alpha1 is not identified "
            "(its effect is absorbed by alpha0)"
        )

    if opts.rescale:
        scale_r = float(np.std(r))
        scale_x = float(np.std(x))
    else:
        scale_r = scale_x = 1.0
    rw = r / scale_r
    xw = x / scale_x

    if opts.start is not None:
        p = opts.start
        start = GarchParams(
            alpha0=p.alpha0 / scale_r,
            alpha1=p.alpha1 * scale_x / scale_r,
            beta0=p.beta0 / scale_r**2,
            beta1=p.beta1,
            beta2=p.beta2,
        )
    else:
        start = starting_params(rw)
    if opts.h0 is not None:
        h0w = resolve_h0(start, rw, xw, opts.h0 / scale_r**2)
    else:
        h0w = resolve_h0(start, rw, xw, "residual-variance")

    def negll(theta):
        try:
            return -log_likelihood_raw(untransform_params(theta), rw, xw, h0w)
        except (ParameterError, NumericalError):
            return np.inf

    nm_options = {
        "maxiter": opts.max_iterations,
        "maxfev": 4 * opts.max_iterations,
        "xatol": opts.x_tol,
        "fatol": opts.f_tol,
    }

    def search(theta0):
        # One simplex run plus a restart from its incumbent.
        first = minimize(negll, theta0, method="Nelder-Mead", options=nm_options)
        second = minimize(negll, first.x, method="Nelder-Mead", options=nm_options)
        best = second if second.fun <= first.fun else first
        return best.x, float(best.fun), bool(second.success), int(first.nit + second.nit)

    candidates = [start]
    if opts.start is None:
        alt = _ols_start(rw, xw)
        if alt is not None:
            candidates.append(alt)
    runs = [search(transform_params(c)) for c in candidates]
    theta_hat, best_fun, converged, iterations = min(runs, key=lambda r: r[1])
    theta_hat = np.asarray(theta_hat, dtype=float)
    if not converged:
        warnings.warn(
            f"GARCH fit did not converge within {opts.max_iterations} iterations "
            f"per stage (objective {best_fun:.6g}); results may be unreliable",
            ConvergenceWarning,
            stacklevel=2,
        )

    params_w = untransform_params(theta_hat)
    eps_w = rw - params_w.alpha0 - params_w.alpha1 * xw
    h_w = variance_recursion(params_w, eps_w, h0w)[:nobs]
    ll = -best_fun - nobs * np.log(scale_r)

    std_errors = _delta_method_se(negll, theta_hat, scale_r, scale_x)
    params = GarchParams(
        alpha0=params_w.alpha0 * scale_r,
        alpha1=params_w.alpha1 * scale_r / scale_x,
        beta0=params_w.beta0 * scale_r**2,
        beta1=params_w.beta1,
        beta2=params_w.beta2,
    )
    estimates = params.as_array()
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std_errors > 0, estimates / std_errors, np.nan)
    p = 2.0 * ndtr(-np.abs(z))

    eps = eps_w * scale_r
    h = h_w * scale_r**2
    return GarchFit(
        params=params,
        std_errors=std_errors,
        z_stats=z,
        p_values=p,
        log_likelihood=ll,
        cond_variance=DatedSeries(data.dates, h, "cond_variance"),
        residuals=DatedSeries(data.dates, eps, "residuals"),
        std_residuals=DatedSeries(data.dates, eps / np.sqrt(h), "std_residuals"),
        converged=converged,
        iterations=iterations,
        h0=h0w * scale_r**2,
    )


def _delta_method_se(negll, theta_hat, scale_r, scale_x) -> np.ndarray:
    """Standard errors in the natural parameter space.

    Inverts the negative Hessian of the log-likelihood in optimizer
    coordinates (where curvature is well scaled) and maps the covariance
    through the reparameterization Jacobian and the data scaling.  On
    failure (singular or non-PD Hessian) warns and returns NaNs.
    """
    try:
        hess = numerical_hessian(negll, theta_hat)
        cov_theta = np.linalg.inv(hess)
        J = _transform_jacobian(theta_hat)
        cov_w = J @ cov_theta @ J.T
        d = np.array([scale_r, scale_r / scale_x, scale_r**2, 1.0, 1.0])
        variances = np.diag(cov_w) * d**2
        if (variances <= 0).any() or not np.isfinite(variances).all():
            raise NumericalError("covariance diagonal is not positive")
        return np.sqrt(variances)
    except (np.linalg.LinAlgError, NumericalError) as exc:
        warnings.warn(
            f"standard errors unavailable: {exc}", ConvergenceWarning, stacklevel=3
        )
        return np.full(5, np.nan)
