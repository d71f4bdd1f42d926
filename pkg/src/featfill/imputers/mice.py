"""Chained-equation imputation with Bayesian ridge draws pooled by mean."""

from __future__ import annotations

import numpy as np

from ..ridge import fit_bayesian_ridge
from ..util import derive_seed, rng_from
from .base import BaseFeatureImputer

#: Number of posterior-draw imputations pooled into the final value.
DEFAULT_N_DRAWS = 150

#: Mean-prediction rounds that settle the chain before draws begin.
DEFAULT_BURN_IN = 5


class MICEImputer(BaseFeatureImputer):
    """Multiple imputation, simplified: fixed per-column posteriors and a
    mean-pooled draw chain.

    Training data is complete, so each missing column gets one Bayesian
    ridge posterior against all other columns, fit once.  At impute time
    the missing block starts at the column means, a few burn-in rounds of
    mean predictions settle the chain, and then each of ``n_draws`` rounds
    updates every missing column (ascending index) with a fresh
    coefficient draw.  The imputed value is the arithmetic mean of the
    values a column took over the draw rounds.
    """

    method = "mice"

    def __init__(
        self,
        missing_indices,
        n_draws=DEFAULT_N_DRAWS,
        burn_in=DEFAULT_BURN_IN,
        seed=0,
    ):
        super().__init__(missing_indices, seed)
        self.n_draws = n_draws
        self.burn_in = burn_in

    def _fit_impl(self, z):
        if self.n_draws < 1:
            raise ValueError(f"n_draws must be >= 1, got {self.n_draws}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        p = self.n_features_
        self.posteriors_ = []
        for j in self.missing_:
            others = [c for c in range(p) if c != int(j)]
            self.posteriors_.append(fit_bayesian_ridge(z[:, others], z[:, j]))

    def _predict_impl(self, z_known):
        rng = rng_from(derive_seed(self.seed, "mice-draws"))
        n = z_known.shape[0]
        buf = np.zeros((n, self.n_features_))
        buf[:, self.known_] = z_known
        others_of = {
            int(j): [c for c in range(self.n_features_) if c != int(j)] for j in self.missing_
        }

        for _ in range(self.burn_in):
            for j, post in zip(self.missing_, self.posteriors_):
                buf[:, j] = post.predict_mean(buf[:, others_of[int(j)]])

        draws = np.empty((self.n_draws, n, self.missing_.size))
        for r in range(self.n_draws):
            for slot, (j, post) in enumerate(zip(self.missing_, self.posteriors_)):
                coefs = post.draw_coefs(rng)
                value = post.predict_draw(buf[:, others_of[int(j)]], coefs)
                buf[:, j] = value
                draws[r, :, slot] = value
        # kept for inspection: pooling is exactly the mean over this stack
        self.last_draws_ = draws
        return draws.mean(axis=0)
