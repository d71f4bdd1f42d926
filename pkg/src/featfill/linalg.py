"""Shared covariance and symmetric-solve helpers for the numeric layer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .util import check_matrix


@dataclass(frozen=True)
class CovarianceSummary:
    """Sample covariance (ddof=1) of a data matrix, symmetrized once so
    every downstream block extraction sees a consistent matrix."""

    matrix: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "CovarianceSummary":
        x = check_matrix(x, "x", min_rows=2)
        cov = np.cov(x, rowvar=False, ddof=1)
        cov = np.atleast_2d(cov)
        cov = 0.5 * (cov + cov.T)
        return cls(matrix=cov)

    @property
    def n_features(self) -> int:
        return self.matrix.shape[0]

    def block(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        return self.matrix[np.ix_(rows, cols)]

    def variance(self, i: int) -> float:
        return float(self.matrix[i, i])


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a @ x = b`` for symmetric positive definite ``a``.

    Cholesky first; if the matrix is numerically singular or indefinite the
    solve falls back to least squares, which returns the minimum-norm
    solution instead of raising.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = np.max(np.abs(a)) or 1.0
    if np.max(np.abs(a - a.T)) > 1e-8 * scale:
        raise ValueError("matrix is not symmetric")
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
        return cho_solve(factor, b, check_finite=False)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(a, b, rcond=None)[0]
