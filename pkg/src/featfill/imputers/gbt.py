"""Boosted-tree imputers: per-column ensembles, chained or iterative."""

from __future__ import annotations

from ..ordering import linear_order
from ..search import Choice, LogUniform
from ..trees import GradientBoostedRegressor
from .base import (
    BaseFeatureImputer,
    chain_fit,
    chain_predict,
    iterative_fit,
    iterative_predict,
)

#: Tuning space shared by boosted regressors and the boosted classifier.
BOOST_SPACE = {
    "max_depth": Choice((2, 3, 4, 6)),
    "n_estimators": Choice((50, 100, 200, 400)),
    "learning_rate": LogUniform(0.01, 0.3),
}

#: Fallback when no search runs and no explicit params are given.
BOOST_DEFAULTS = {"max_depth": 3, "n_estimators": 100, "learning_rate": 0.1}


def booster_from_params(params: dict) -> GradientBoostedRegressor:
    return GradientBoostedRegressor(
        n_estimators=params["n_estimators"],
        learning_rate=params["learning_rate"],
        max_depth=params["max_depth"],
    )


class BoostChainImputer(BaseFeatureImputer):
    """Per-column boosted ensembles in imputability order; each filled
    column joins the predictors of later ones.  One search tunes the
    shared boosting parameters for the whole chain."""

    method = "xgb-li"

    def __init__(self, missing_indices, params=None, search_trials=20, recalc=True, seed=0):
        super().__init__(missing_indices, seed)
        self.params = params
        self.search_trials = search_trials
        self.recalc = recalc

    def _search_space(self):
        return BOOST_SPACE

    def _fit_impl(self, z):
        self.order_ = linear_order(z, self.missing_.tolist(), recalc=self.recalc)
        self.models_ = chain_fit(
            self.known_.tolist(),
            self.order_,
            lambda preds, j, slot: booster_from_params(self.params_).fit(z[:, preds], z[:, j]),
        )

    def _predict_impl(self, z_known):
        buf = chain_predict(
            z_known,
            self.n_features_,
            self.known_.tolist(),
            self.order_,
            self.models_,
            lambda model, a: model.predict(a),
        )
        return buf[:, self.missing_]


class BoostIterativeImputer(BaseFeatureImputer):
    """Boosted ensembles in the two-phase scheme: fill from known columns,
    then re-predict each missing column from all others for up to
    ``n_iter`` rounds with early stopping."""

    method = "xgb-iter"

    def __init__(
        self, missing_indices, params=None, search_trials=20, n_iter=3, tol=1e-6, seed=0
    ):
        super().__init__(missing_indices, seed)
        self.params = params
        self.search_trials = search_trials
        self.n_iter = n_iter
        self.tol = tol

    def _search_space(self):
        return BOOST_SPACE

    def _fit_impl(self, z):
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        self.phase1_, self.phase2_ = iterative_fit(
            self.n_features_,
            self.known_.tolist(),
            self.missing_.tolist(),
            lambda preds, j, slot: booster_from_params(self.params_).fit(z[:, preds], z[:, j]),
        )

    def _predict_impl(self, z_known):
        buf = iterative_predict(
            z_known,
            self.n_features_,
            self.known_.tolist(),
            self.missing_.tolist(),
            self.phase1_,
            self.phase2_,
            lambda model, a: model.predict(a),
            self.n_iter,
            self.tol,
        )
        return buf[:, self.missing_]
