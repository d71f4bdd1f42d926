"""Donor-based imputation from the k nearest training rows."""

from __future__ import annotations

import numpy as np

from .base import BaseFeatureImputer


class KNNFeatureImputer(BaseFeatureImputer):
    """Fill missing columns with an inverse-distance-weighted donor mean.

    Distances are Euclidean over the standardized known columns only, so
    a test row can always be compared against the training set.  The same
    k donors (with the same weights) fill every missing column of a row.
    A donor at distance zero is an exact match on the known columns; when
    any exist, the fill is the plain average of all exact matches.
    """

    method = "knn"

    def __init__(self, missing_indices, k=5, seed=0):
        super().__init__(missing_indices, seed)
        self.k = k

    def _fit_impl(self, z):
        if not 1 <= self.k <= z.shape[0]:
            raise ValueError(f"k must lie in [1, {z.shape[0]}], got {self.k}")
        self.donor_known_ = z[:, self.known_].copy()
        self.donor_values_ = z[:, self.missing_].copy()

    def _predict_impl(self, z_known):
        sq = (
            np.sum(z_known**2, axis=1)[:, None]
            - 2.0 * z_known @ self.donor_known_.T
            + np.sum(self.donor_known_**2, axis=1)[None, :]
        )
        dist = np.sqrt(np.maximum(sq, 0.0))
        # Stable argsort: equal distances resolve to the lower donor index.
        nearest = np.argsort(dist, axis=1, kind="stable")[:, : self.k]

        out = np.empty((z_known.shape[0], self.missing_.size))
        for row in range(z_known.shape[0]):
            exact = np.flatnonzero(dist[row] == 0.0)
            if exact.size:
                out[row] = self.donor_values_[exact].mean(axis=0)
                continue
            donors = nearest[row]
            weights = 1.0 / dist[row, donors]
            out[row] = weights @ self.donor_values_[donors] / weights.sum()
        return out
