"""Column standardization with exact inversion.

Imputers and distance-based models standardize internally and must map
results back to the original scale bit-for-bit where no model touched the
data, so the transform keeps its parameters explicit and invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .util import check_matrix

#: Columns whose sample standard deviation falls below this are treated as
#: constant: they standardize to 0 and invert back to their mean.
STD_FLOOR = 1e-12


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column location/scale estimated from a fit matrix."""

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "StandardizationParams":
        x = check_matrix(x, "x", min_rows=2)
        mean = x.mean(axis=0)
        std = x.std(axis=0, ddof=1)
        std = np.where(std < STD_FLOOR, 1.0, std)
        return cls(mean=mean, std=std)

    @property
    def n_features(self) -> int:
        return self.mean.shape[0]

    def _check_width(self, x: np.ndarray) -> np.ndarray:
        # zero rows is fine: an empty batch maps to an empty batch
        x = check_matrix(x, "x", min_rows=0)
        if x.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} columns, got {x.shape[1]}")
        return x

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (self._check_width(x) - self.mean) / self.std

    def invert(self, z: np.ndarray) -> np.ndarray:
        return self._check_width(z) * self.std + self.mean

    def apply_columns(self, x: np.ndarray, cols) -> np.ndarray:
        """Standardize a matrix holding only the listed original columns."""
        cols = np.asarray(cols, dtype=np.intp)
        x = check_matrix(x, "x", min_rows=1)
        if x.shape[1] != cols.shape[0]:
            raise ValueError(f"{x.shape[1]} columns for {cols.shape[0]} indices")
        return (x - self.mean[cols]) / self.std[cols]

    def invert_columns(self, z: np.ndarray, cols) -> np.ndarray:
        cols = np.asarray(cols, dtype=np.intp)
        z = check_matrix(z, "z", min_rows=1)
        if z.shape[1] != cols.shape[0]:
            raise ValueError(f"{z.shape[1]} columns for {cols.shape[0]} indices")
        return z * self.std[cols] + self.mean[cols]


class Standardizer(BaseEstimator, TransformerMixin):
    """Estimator wrapper over :class:`StandardizationParams`."""

    def fit(self, X, y=None):
        self.params_ = StandardizationParams.fit(X)
        return self

    def _params(self) -> StandardizationParams:
        if not hasattr(self, "params_"):
            raise NotFittedError("Standardizer is not fitted; call fit first")
        return self.params_

    def transform(self, X) -> np.ndarray:
        return self._params().apply(X)

    def inverse_transform(self, Z) -> np.ndarray:
        return self._params().invert(Z)
