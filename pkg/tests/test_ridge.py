"""Evidence-optimized ridge regression posterior.

With abundant clean data the posterior mean must approach the generating
coefficients, and the posterior draws must be centered on the mean with the
spread encoded by the stored covariance factor.
"""

import numpy as np
import pytest

from featfill.ridge import fit_bayesian_ridge


def make_problem(n=500, noise=0.1, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 4))
    coefs = np.array([2.0, -1.0, 0.0, 0.5])
    y = x @ coefs + 3.0 + noise * rng.standard_normal(n)
    return x, y, coefs


def test_recovers_generating_coefficients():
    x, y, coefs = make_problem()
    post = fit_bayesian_ridge(x, y)
    assert np.allclose(post.coef_mean, coefs, atol=0.05)
    assert post.intercept == pytest.approx(3.0, abs=0.05)


def test_predict_mean_matches_manual_affine():
    x, y, _ = make_problem()
    post = fit_bayesian_ridge(x, y)
    manual = (x - post.x_mean) @ post.coef_mean + post.y_mean
    assert np.allclose(post.predict_mean(x), manual)


def test_noise_precision_tracks_noise_level():
    x, y, _ = make_problem(noise=0.5, seed=1)
    post = fit_bayesian_ridge(x, y)
    # alpha is 1/sigma^2; sigma=0.5 gives alpha near 4
    assert post.noise_precision == pytest.approx(4.0, rel=0.3)


def test_draws_center_on_mean_with_factor_spread():
    x, y, _ = make_problem(noise=1.0, seed=2)
    post = fit_bayesian_ridge(x, y)
    rng = np.random.default_rng(0)
    draws = np.array([post.draw_coefs(rng) for _ in range(4000)])
    assert np.allclose(draws.mean(axis=0), post.coef_mean, atol=0.01)
    emp_cov = np.cov(draws, rowvar=False, ddof=1)
    assert np.allclose(emp_cov, post.coef_cov, atol=0.01)


def test_factor_squares_to_covariance():
    x, y, _ = make_problem(seed=3)
    post = fit_bayesian_ridge(x, y)
    assert np.allclose(post.cov_factor @ post.cov_factor.T, post.coef_cov,
                       rtol=1e-8, atol=1e-12)


def test_near_noiseless_posterior_is_tight():
    x, y, coefs = make_problem(noise=1e-6, seed=4)
    post = fit_bayesian_ridge(x, y)
    assert np.allclose(post.coef_mean, coefs, atol=1e-4)
    assert np.trace(post.coef_cov) < 1e-8


def test_deterministic():
    x, y, _ = make_problem(seed=5)
    a = fit_bayesian_ridge(x, y)
    b = fit_bayesian_ridge(x, y)
    assert np.array_equal(a.coef_mean, b.coef_mean)
    assert a.n_iter == b.n_iter


def test_single_column():
    rng = np.random.default_rng(6)
    x = rng.standard_normal((200, 1))
    y = 2.0 * x[:, 0] + 0.1 * rng.standard_normal(200)
    post = fit_bayesian_ridge(x, y)
    assert post.coef_mean[0] == pytest.approx(2.0, abs=0.05)
