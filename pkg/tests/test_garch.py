import math

import numpy as np
import pytest

import _oracles
from conftest import make_dataset
from fxvol import (
    ConvergenceWarning,
    DataError,
    FitOptions,
    GarchParams,
    NumericalError,
    ParameterError,
    SimConfig,
    fit,
    log_likelihood,
    numerical_hessian,
    simulate,
    unconditional_variance,
    variance_recursion,
)
from fxvol.garch import (
    log_likelihood_raw,
    resolve_h0,
    transform_params,
    untransform_params,
)


def random_valid_params(rng):
    s = rng.uniform(0.05, 0.97)
    share = rng.uniform(0.05, 0.95)
    return GarchParams(
        alpha0=rng.uniform(-0.5, 0.5),
        alpha1=rng.uniform(-0.5, 0.5),
        beta0=rng.uniform(0.01, 0.3),
        beta1=s * share,
        beta2=s * (1.0 - share),
    )


class TestGarchParams:
    def test_valid_construction(self):
        p = GarchParams(0.0, 0.5, 0.1, 0.8, 0.1)
        assert p.beta1 + p.beta2 < 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(beta0=0.0),
            dict(beta0=-1.0),
            dict(beta1=-0.1),
            dict(beta2=-0.1),
            dict(beta1=0.6, beta2=0.4),
            dict(beta1=0.9, beta2=0.3),
            dict(alpha0=float("nan")),
            dict(beta0=float("inf")),
        ],
    )
    def test_invalid_construction(self, kwargs):
        base = dict(alpha0=0.0, alpha1=0.0, beta0=0.1, beta1=0.5, beta2=0.3)
        base.update(kwargs)
        with pytest.raises(ParameterError):
            GarchParams(**base)


class TestVarianceRecursion:
    def test_constant_variance_degenerate_case(self):
        p = GarchParams(0.0, 0.0, 1.0, 0.0, 0.0)
        h = variance_recursion(p, np.zeros(5), h0=3.0)
        assert h == pytest.approx(np.ones(6), abs=0.0)

    def test_direct_arithmetic(self):
        # b0=0.2 b1=0.5 b2=0.3, h0=1, shocks [1, 2]:
        #   h[0] = 0.2 + 0.5*1 + 0.3*1   = 1.0   (pre-sample shock^2 = h0)
        #   h[1] = 0.2 + 0.5*1.0 + 0.3*1 = 1.0
        #   h[2] = 0.2 + 0.5*1.0 + 0.3*4 = 1.9
        p = GarchParams(0.0, 0.0, 0.2, 0.5, 0.3)
        h = variance_recursion(p, [1.0, 2.0], h0=1.0)
        assert h == pytest.approx([1.0, 1.0, 1.9], rel=1e-15)

    def test_matches_independent_loop(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            p = random_valid_params(rng)
            u = rng.standard_normal(200)
            h0 = rng.uniform(0.1, 2.0)
            mine = variance_recursion(p, u, h0)
            ref = _oracles.recursion_loop(p.beta0, p.beta1, p.beta2, u, h0)
            assert np.max(np.abs(mine - ref)) < 1e-12 * max(1.0, ref.max())

    def test_all_positive(self):
        rng = np.random.default_rng(22)
        p = random_valid_params(rng)
        h = variance_recursion(p, rng.standard_normal(500), h0=0.5)
        assert (h > 0).all()

    def test_invalid_params_rejected(self):
        class Raw:
            alpha0 = alpha1 = 0.0
            beta0, beta1, beta2 = 0.0, 0.5, 0.3

        with pytest.raises(ParameterError):
            variance_recursion(Raw(), [1.0], h0=1.0)

    def test_bad_h0(self):
        p = GarchParams(0.0, 0.0, 0.2, 0.5, 0.3)
        with pytest.raises(ParameterError, match="h0"):
            variance_recursion(p, [1.0], h0=0.0)

    def test_empty_residuals(self):
        p = GarchParams(0.0, 0.0, 0.2, 0.5, 0.3)
        with pytest.raises(DataError):
            variance_recursion(p, [], h0=1.0)


class TestLogLikelihood:
    def test_single_standard_normal_observation(self):
        # h1 = beta0 = 1 when beta1 = beta2 = 0, so LL = -0.5 ln(2 pi)
        p = GarchParams(0.0, 0.0, 1.0, 0.0, 0.0)
        ll = log_likelihood_raw(p, [0.0], [0.0], h0=1.0)
        assert ll == pytest.approx(-0.9189385332046727, rel=1e-14)

    def test_matches_per_point_density_oracle(self):
        rng = np.random.default_rng(23)
        from scipy.stats import norm

        for _ in range(10):
            p = random_valid_params(rng)
            r = rng.standard_normal(150)
            x = rng.standard_normal(150)
            h0 = rng.uniform(0.2, 2.0)
            eps = r - p.alpha0 - p.alpha1 * x
            h = _oracles.recursion_loop(p.beta0, p.beta1, p.beta2, eps, h0)[:150]
            ref = float(np.sum(norm.logpdf(eps, loc=0.0, scale=np.sqrt(h))))
            assert log_likelihood_raw(p, r, x, h0) == pytest.approx(ref, rel=1e-12)

    def test_loop_oracle(self):
        rng = np.random.default_rng(24)
        p = random_valid_params(rng)
        r = rng.standard_normal(100)
        x = rng.standard_normal(100)
        ref = _oracles.loglik_loop(p, r, x, 0.7)
        assert log_likelihood_raw(p, r, x, 0.7) == pytest.approx(ref, rel=1e-12)

    def test_invalid_beta0_errors(self):
        with pytest.raises(ParameterError):
            GarchParams(0.0, 0.0, 0.0, 0.5, 0.3)

    def test_dataset_entry_point(self):
        rng = np.random.default_rng(25)
        ds = make_dataset(rng.standard_normal(60), rng.standard_normal(60))
        p = GarchParams(0.0, 0.0, 0.2, 0.5, 0.3)
        ll = log_likelihood(p, ds, h0_policy=1.0)
        assert ll == pytest.approx(log_likelihood_raw(p, ds.returns, ds.exog, 1.0))
        # residual-variance policy resolves h0 from the data
        eps = ds.returns - 0.0
        ll2 = log_likelihood(p, ds)
        assert ll2 == pytest.approx(
            log_likelihood_raw(p, ds.returns, ds.exog, float(np.var(eps)))
        )

    def test_gradient_against_analytic_oracle(self):
        rng = np.random.default_rng(26)
        sim = simulate(
            SimConfig(
                params=GarchParams(0.0, 0.3, 0.1, 0.6, 0.2),
                length=300,
                seed=9,
                exog_mode="normal",
            )
        )
        r, x = sim.data.returns, sim.data.exog
        names = ("alpha0", "alpha1", "beta0", "beta1", "beta2")
        for _ in range(20):
            p = random_valid_params(rng)
            point = np.array([getattr(p, n) for n in names])

            def ll_of(vec):
                return log_likelihood_raw(GarchParams(*vec), r, x, 1.0)

            fd = _oracles.finite_difference_gradient(ll_of, point)
            an = _oracles.analytic_gradient(p, r, x, 1.0)
            rel = np.max(np.abs(fd - an)) / max(np.max(np.abs(an)), 1.0)
            assert rel < 1e-5


class TestReparameterization:
    def test_round_trip(self):
        rng = np.random.default_rng(27)
        for _ in range(50):
            p = random_valid_params(rng)
            q = untransform_params(transform_params(p))
            for name in ("alpha0", "alpha1", "beta0", "beta1", "beta2"):
                assert getattr(q, name) == pytest.approx(getattr(p, name), abs=1e-10)

    def test_any_theta_maps_to_valid_params(self):
        rng = np.random.default_rng(28)
        for _ in range(100):
            theta = rng.uniform(-20, 20, size=5)
            p = untransform_params(theta)  # construction validates
            assert p.beta1 + p.beta2 < 1.0

    def test_boundary_params_not_transformable(self):
        with pytest.raises(ParameterError):
            transform_params(GarchParams(0.0, 0.0, 0.1, 0.0, 0.0))


class TestNumericalHessian:
    def test_quadratic(self):
        H = numerical_hessian(lambda v: v[0] ** 2, np.array([1.7]))
        assert H[0, 0] == pytest.approx(2.0, abs=1e-6)

    def test_cross_term(self):
        H = numerical_hessian(lambda v: v[0] * v[1], np.array([0.3, -1.2]))
        assert H[0, 1] == pytest.approx(1.0, abs=1e-6)
        assert H[1, 0] == pytest.approx(1.0, abs=1e-6)
        assert abs(H[0, 0]) < 1e-6 and abs(H[1, 1]) < 1e-6

    def test_quartic_against_analytic(self):
        # f = x^4 + 3 x^2 y^2 + y^4 + x y^3
        def f(v):
            x, y = v
            return x**4 + 3 * x**2 * y**2 + y**4 + x * y**3

        def hess(v):
            x, y = v
            return np.array(
                [
                    [12 * x**2 + 6 * y**2, 12 * x * y + 3 * y**2],
                    [12 * x * y + 3 * y**2, 6 * x**2 + 12 * y**2 + 6 * x * y],
                ]
            )

        rng = np.random.default_rng(29)
        for _ in range(10):
            v = rng.uniform(0.5, 2.0, size=2)
            H = numerical_hessian(f, v)
            ref = hess(v)
            assert np.max(np.abs(H - ref) / np.abs(ref).max()) < 1e-4

    def test_symmetry(self):
        rng = np.random.default_rng(30)
        A = rng.normal(size=(3, 3))

        def f(v):
            return math.sin(v @ A @ v)

        H = numerical_hessian(f, np.array([0.1, 0.2, -0.3]))
        assert np.array_equal(H, H.T)

    def test_non_finite_objective(self):
        with pytest.raises(NumericalError, match="not finite"):
            numerical_hessian(lambda v: float("nan"), np.array([1.0]))

    def test_step_validation(self):
        with pytest.raises(ParameterError):
            numerical_hessian(lambda v: v[0] ** 2, np.array([1.0]), step=np.array([1.0, 2.0]))


class TestUnconditionalVariance:
    def test_simple_cases(self):
        assert unconditional_variance(GarchParams(0, 0, 0.2, 0.5, 0.3)) == pytest.approx(1.0)
        assert unconditional_variance(GarchParams(0, 0, 1.0, 0.0, 0.0)) == pytest.approx(1.0)

    def test_published_fit_values(self):
        # 2.76e-11 / (1 - 0.4910 - 0.2695); independent value 1.1524008350731e-10
        p = GarchParams(7.43e-07, 5.86e-09, 2.76e-11, 0.4910, 0.2695)
        assert p.beta1 + p.beta2 == pytest.approx(0.7605)
        assert p.beta1 + p.beta2 < 1.0
        assert unconditional_variance(p) == pytest.approx(1.1524008350730689e-10, rel=1e-12)

    def test_non_stationary_error(self):
        class Raw:
            beta0, beta1, beta2 = 0.1, 0.7, 0.35

        with pytest.raises(ParameterError, match="non-stationary"):
            unconditional_variance(Raw())


class TestFit:
    def test_parameter_recovery(self, sim_5000, recovery_truth):
        f = fit(sim_5000.data)
        assert f.converged
        err = np.abs(f.params.as_array() - recovery_truth.as_array())
        assert (err <= 3.0 * f.std_errors).all()
        assert abs(f.params.beta1 - recovery_truth.beta1) < 0.05
        assert abs(f.params.beta2 - recovery_truth.beta2) < 0.05
        assert f.params.beta1 + f.params.beta2 < 1.0

    def test_recursion_reproduces_cond_variance(self, sim_5000):
        f = fit(sim_5000.data)
        again = variance_recursion(f.params, f.residuals.values, f.h0)[: f.nobs]
        assert np.max(np.abs(again - f.cond_variance.values) / f.cond_variance.values) < 1e-10

    def test_z_stats_consistent(self, sim_5000):
        f = fit(sim_5000.data)
        assert f.z_stats == pytest.approx(f.params.as_array() / f.std_errors, rel=1e-12)
        assert ((f.p_values >= 0) & (f.p_values <= 1)).all()

    def test_standardized_residual_variance_near_one(self, sim_5000):
        f = fit(sim_5000.data)
        assert 0.9 <= float(np.var(f.std_residuals.values)) <= 1.1

    def test_likelihood_not_below_start(self, sim_5000):
        from fxvol.garch import starting_params

        f = fit(sim_5000.data)
        start = starting_params(sim_5000.data.returns)
        ll_start = log_likelihood_raw(
            start, sim_5000.data.returns, sim_5000.data.exog, f.h0
        )
        assert f.log_likelihood >= ll_start - 1e-8
        # reported likelihood is reproducible from the reported params and h0
        ll_again = log_likelihood_raw(
            f.params, sim_5000.data.returns, sim_5000.data.exog, f.h0
        )
        assert ll_again == pytest.approx(f.log_likelihood, rel=1e-8)

    def test_exog_centering_invariance(self):
        truth = GarchParams(0.0, 0.4, 0.1, 0.7, 0.15)
        sim = simulate(SimConfig(params=truth, length=3000, seed=5, exog_mode="normal"))
        base = fit(sim.data)
        shift = 2.5
        shifted = make_dataset(sim.data.returns, sim.data.exog + shift)
        moved = fit(shifted)

        def rel(a, b):
            return abs(a - b) / max(abs(a), abs(b), 1e-12)

        assert rel(moved.params.alpha1, base.params.alpha1) < 1e-4
        assert rel(moved.params.beta1, base.params.beta1) < 1e-4
        assert rel(moved.params.beta2, base.params.beta2) < 1e-4
        assert rel(moved.params.beta0, base.params.beta0) < 1e-3
        expected_alpha0 = base.params.alpha0 - base.params.alpha1 * shift
        scale = max(abs(expected_alpha0), abs(base.params.alpha1) * shift)
        assert abs(moved.params.alpha0 - expected_alpha0) < 1e-4 * scale

    def test_constant_returns_rejected(self):
        ds = make_dataset(np.zeros(50) + 1.0, np.arange(50.0))
        with pytest.raises(DataError, match="degenerate"):
            fit(ds)

    def test_constant_exog_rejected(self):
        rng = np.random.default_rng(31)
        ds = make_dataset(rng.standard_normal(50), np.ones(50))
        with pytest.raises(DataError, match="not identified"):
            fit(ds)

    def test_non_convergence_warns_and_flags(self):
        rng = np.random.default_rng(32)
        ds = make_dataset(rng.standard_normal(200), rng.standard_normal(200))
        with pytest.warns(ConvergenceWarning):
            f = fit(ds, FitOptions(max_iterations=2))
        assert f.converged is False

    def test_explicit_start_and_h0(self, sim_5000):
        truth = GarchParams(0.0, 0.5, 0.1, 0.8, 0.1)
        f = fit(sim_5000.data, FitOptions(start=truth, h0=1.0))
        assert f.converged
        assert f.h0 == pytest.approx(1.0)

    def test_recovery_at_target_data_scale(self):
        # exchange-rate-sized returns against case-count-sized exog: the
        # variance intercept and the regressor differ by ~15 orders of
        # magnitude, which the internal rescaling must absorb
        truth = GarchParams(
            alpha0=7.43e-07, alpha1=5.86e-09, beta0=2.76e-11,
            beta1=0.4910, beta2=0.2695,
        )
        sim = simulate(
            SimConfig(params=truth, length=2000, seed=14, exog_mode="normal",
                      exog_mean=5.8, exog_std=259.0)
        )
        f = fit(sim.data)
        assert f.converged
        err = np.abs(f.params.as_array() - truth.as_array())
        assert (err <= 3.0 * f.std_errors).all()
        assert f.params.beta1 + f.params.beta2 < 1.0

    def test_fit_without_rescaling_agrees(self):
        truth = GarchParams(0.0, 0.4, 0.1, 0.6, 0.2)
        sim = simulate(SimConfig(params=truth, length=2000, seed=13, exog_mode="normal"))
        a = fit(sim.data)
        b = fit(sim.data, FitOptions(rescale=False))
        # same optimum up to optimizer tolerance (data are already near unit scale)
        assert a.params.as_array() == pytest.approx(b.params.as_array(), abs=5e-3)


class TestResolveH0:
    def test_fixed_value(self):
        p = GarchParams(0.0, 0.0, 0.1, 0.5, 0.3)
        assert resolve_h0(p, [1.0, 2.0], [0.0, 0.0], 2.5) == 2.5

    def test_residual_variance(self):
        p = GarchParams(1.0, 0.0, 0.1, 0.5, 0.3)
        r = np.array([1.0, 3.0, 5.0])
        got = resolve_h0(p, r, np.zeros(3), "residual-variance")
        assert got == pytest.approx(float(np.var(r - 1.0)))

    def test_invalid(self):
        p = GarchParams(0.0, 0.0, 0.1, 0.5, 0.3)
        with pytest.raises(ParameterError):
            resolve_h0(p, [1.0], [0.0], -1.0)
        with pytest.raises(ParameterError):
            resolve_h0(p, [1.0], [0.0], "backcast")
