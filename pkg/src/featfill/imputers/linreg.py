"""Least-squares imputers: ordered chaining and iterative refinement."""

from __future__ import annotations

import numpy as np

from ..ordering import linear_order
from .base import (
    BaseFeatureImputer,
    chain_fit,
    chain_predict,
    iterative_fit,
    iterative_predict,
)


def ols_fit(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares coefficients with an intercept in the last slot."""
    aug = np.hstack([a, np.ones((a.shape[0], 1))])
    return np.linalg.lstsq(aug, y, rcond=None)[0]


def ols_predict(coefs: np.ndarray, a: np.ndarray) -> np.ndarray:
    return a @ coefs[:-1] + coefs[-1]


class LinearChainImputer(BaseFeatureImputer):
    """One regression per missing column, fit and applied in order of how
    well the known columns linearly explain each candidate.

    Each filled column becomes a regressor for the later ones.  The order
    is scored once against the originally known columns: a regression of
    a linear prediction adds nothing a direct regression would miss, so
    re-scoring after each step cannot change what this method produces.
    """

    method = "linreg-li"

    def __init__(self, missing_indices, recalc=False, seed=0):
        super().__init__(missing_indices, seed)
        self.recalc = recalc

    def _fit_impl(self, z):
        self.order_ = linear_order(z, self.missing_.tolist(), recalc=self.recalc)
        self.models_ = chain_fit(
            self.known_.tolist(),
            self.order_,
            lambda preds, j, slot: ols_fit(z[:, preds], z[:, j]),
        )

    def _predict_impl(self, z_known):
        buf = chain_predict(
            z_known,
            self.n_features_,
            self.known_.tolist(),
            self.order_,
            self.models_,
            lambda coefs, a: ols_predict(coefs, a),
        )
        return buf[:, self.missing_]


class LinearIterativeImputer(BaseFeatureImputer):
    """Two-phase regression scheme: first fill every missing column from
    the known ones, then re-predict each column from all other columns
    (known plus current fills) for up to ``n_iter`` rounds, stopping early
    once the largest standardized change drops under ``tol``."""

    method = "linreg-iter"

    def __init__(self, missing_indices, n_iter=3, tol=1e-6, seed=0):
        super().__init__(missing_indices, seed)
        self.n_iter = n_iter
        self.tol = tol

    def _fit_impl(self, z):
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        self.phase1_, self.phase2_ = iterative_fit(
            self.n_features_,
            self.known_.tolist(),
            self.missing_.tolist(),
            lambda preds, j, slot: ols_fit(z[:, preds], z[:, j]),
        )

    def _predict_impl(self, z_known):
        buf = iterative_predict(
            z_known,
            self.n_features_,
            self.known_.tolist(),
            self.missing_.tolist(),
            self.phase1_,
            self.phase2_,
            lambda coefs, a: ols_predict(coefs, a),
            self.n_iter,
            self.tol,
        )
        return buf[:, self.missing_]
