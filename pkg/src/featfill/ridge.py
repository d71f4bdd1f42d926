"""Bayesian linear regression with evidence-maximized hyperparameters.

The model is y = X b + intercept + noise, with an isotropic Gaussian prior
on b.  Noise precision and prior precision are re-estimated by the MacKay
fixed-point rules.  The fit exposes the full coefficient posterior (mean,
covariance, and a factor of the covariance) so callers can draw coefficient
vectors, not just point predictions; chained-equation imputation is built on
exactly those draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .util import check_matrix

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class BayesianRidgePosterior:
    """Coefficient posterior N(coef_mean, coef_cov) for centered data.

    ``cov_factor`` satisfies ``cov_factor @ cov_factor.T == coef_cov``;
    draws are ``coef_mean + cov_factor @ z``.  Intercepts are recovered
    from the stored centering so each draw predicts on the original scale.
    """

    coef_mean: np.ndarray
    coef_cov: np.ndarray
    cov_factor: np.ndarray
    x_mean: np.ndarray
    y_mean: float
    noise_precision: float
    prior_precision: float
    n_iter: int

    @property
    def intercept(self) -> float:
        return self.y_mean - float(self.x_mean @ self.coef_mean)

    def _check(self, x) -> np.ndarray:
        x = check_matrix(x, "x", min_rows=1)
        if x.shape[1] != self.coef_mean.shape[0]:
            raise ValueError(f"expected {self.coef_mean.shape[0]} columns, got {x.shape[1]}")
        return x

    def predict_mean(self, x) -> np.ndarray:
        x = self._check(x)
        return (x - self.x_mean) @ self.coef_mean + self.y_mean

    def draw_coefs(self, rng: np.random.Generator) -> np.ndarray:
        return self.coef_mean + self.cov_factor @ rng.standard_normal(self.coef_mean.shape[0])

    def predict_draw(self, x, coefs: np.ndarray) -> np.ndarray:
        x = self._check(x)
        return (x - self.x_mean) @ coefs + self.y_mean


def fit_bayesian_ridge(
    x: np.ndarray,
    y: np.ndarray,
    max_iter: int = 50,
    tol: float = 1e-4,
) -> BayesianRidgePosterior:
    """Fit the evidence-maximized Bayesian ridge model.

    Hyperparameter updates run on the eigendecomposition of X'X, so each
    of the (at most ``max_iter``) rounds is O(p^2).  Iteration stops when
    the absolute coefficient change falls under ``tol``.
    """
    x = check_matrix(x, "x", min_rows=2)
    y = np.asarray(y, dtype=np.float64).ravel()
    n, p = x.shape
    if y.shape[0] != n:
        raise ValueError(f"{y.shape[0]} targets for {n} rows")

    x_mean = x.mean(axis=0)
    y_mean = float(y.mean())
    xc = x - x_mean
    yc = y - y_mean

    gram = xc.T @ xc
    eigvals, eigvecs = np.linalg.eigh(0.5 * (gram + gram.T))
    eigvals = np.maximum(eigvals, 0.0)
    # Directions with (relatively) zero eigenvalue are outside the data
    # span: unidentifiable, their target projections pure rounding dust.
    # Pin coefficients and posterior spread there to zero, as minimum-norm
    # least squares would, or the dust gets amplified without bound.
    live = eigvals > eigvals.max() * 1e-10 if eigvals.max() > 0 else np.zeros(p, bool)
    xty = np.where(live, eigvecs.T @ (xc.T @ yc), 0.0)

    noise = 1.0 / max(float(np.var(y)), _EPS)
    prior = 1.0
    coefs = np.zeros(p)
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        scaled = np.where(live, 1.0 / (prior + noise * eigvals), 0.0)
        rotated = scaled * (noise * xty)
        new_coefs = eigvecs @ rotated
        gamma = float(np.sum((noise * eigvals / (prior + noise * eigvals))[live]))
        residual = yc - xc @ new_coefs
        prior = gamma / max(float(new_coefs @ new_coefs), _EPS)
        noise = max(n - gamma, _EPS) / max(float(residual @ residual), _EPS)
        done = np.sum(np.abs(new_coefs - coefs)) < tol
        coefs = new_coefs
        if done:
            break

    scaled = np.where(live, 1.0 / (prior + noise * eigvals), 0.0)
    coefs = eigvecs @ (scaled * (noise * xty))
    cov = (eigvecs * scaled) @ eigvecs.T
    factor = eigvecs * np.sqrt(scaled)
    return BayesianRidgePosterior(
        coef_mean=coefs,
        coef_cov=cov,
        cov_factor=factor,
        x_mean=x_mean,
        y_mean=y_mean,
        noise_precision=noise,
        prior_precision=prior,
        n_iter=n_iter,
    )
