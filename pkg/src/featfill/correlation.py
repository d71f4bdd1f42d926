"""Squared multiple correlation of one column against a set of others.

This is the population R^2 of the best linear predictor, computed from
covariance blocks:

    rho2(i | K) = c' C_KK^{-1} c / var(i),   c = cov(X_K, X_i)

It equals the in-sample R^2 of an ordinary least squares fit of column i on
the columns in K (with intercept), which the tests exploit as an
independent oracle.
"""

from __future__ import annotations

import numpy as np

from .linalg import CovarianceSummary, solve_spd

#: Relative ridge added to the known-block diagonal before the solve, to
#: keep near-collinear known sets from producing rho2 > 1 blowups.
RIDGE_SCALE = 1e-9

#: Variances below this mark a column as constant (rho2 defined as 0).
VAR_FLOOR = 1e-24


def best_linear_weights(cov: CovarianceSummary, target: int, known) -> np.ndarray:
    """Regression weights of the best linear predictor of ``target`` from
    the ``known`` columns (no intercept term; covariances absorb means)."""
    known = np.asarray(list(known), dtype=np.intp)
    if known.size == 0:
        return np.zeros(0)
    block = cov.block(known, known).copy()
    ridge = RIDGE_SCALE * np.trace(block) / block.shape[0]
    block[np.diag_indices_from(block)] += ridge
    cross = cov.block(known, [target])[:, 0]
    return solve_spd(block, cross)


def multiple_correlation(cov: CovarianceSummary, target: int, known) -> float:
    """Squared multiple correlation of ``target`` given ``known`` columns.

    Returns a value clamped to [0, 1]; a constant target column or an empty
    known set yields 0.0.
    """
    known = np.asarray(list(known), dtype=np.intp)
    target = int(target)
    if target < 0 or target >= cov.n_features:
        raise ValueError(f"target {target} out of range for {cov.n_features} features")
    if np.any(known == target):
        raise ValueError(f"target {target} appears in the known set")
    variance = cov.variance(target)
    if known.size == 0 or variance < VAR_FLOOR:
        return 0.0
    weights = best_linear_weights(cov, target, known)
    cross = cov.block(known, [target])[:, 0]
    rho2 = float(np.dot(cross, weights) / variance)
    return min(max(rho2, 0.0), 1.0)
