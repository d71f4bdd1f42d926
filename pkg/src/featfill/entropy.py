"""Nearest-neighbor differential entropy estimation.

Implements the classic k-NN entropy estimator in nats with the Euclidean
metric:

    H_hat = psi(n) - psi(k) + log V_d + (d / n) * sum_i log eps_i

where ``eps_i`` is the distance from row i to its k-th nearest neighbor and
``V_d = pi^(d/2) / Gamma(d/2 + 1)`` is the unit-ball volume.  Conditional
entropy is estimated as the difference of two joint estimates.  The
estimator degrades quickly with dimension, so joint dimensions above
:data:`MAX_DIMENSIONS` are refused outright rather than silently returning
noise.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma, gammaln

from .util import check_matrix, derive_seed, rng_from

#: Hard cap on the joint dimension of any single entropy estimate.
MAX_DIMENSIONS = 8

#: Default neighbor count.
DEFAULT_K = 5

#: Half-width of the uniform jitter applied to break exact ties.
JITTER = 1e-10


class DimensionLimitError(ValueError):
    """Raised when an entropy estimate would run in too many dimensions."""


def _log_unit_ball_volume(d: int) -> float:
    return 0.5 * d * np.log(np.pi) - gammaln(0.5 * d + 1.0)


def kl_entropy(x: np.ndarray, k: int = DEFAULT_K, seed: int = 0) -> float:
    """Differential entropy of the rows of ``x``, in nats.

    A deterministic uniform jitter of half-width :data:`JITTER` breaks
    duplicate rows, which would otherwise contribute log(0).
    """
    x = check_matrix(x, "x", min_rows=2)
    n, d = x.shape
    if d > MAX_DIMENSIONS:
        raise DimensionLimitError(
            f"entropy estimate over {d} dimensions refused (limit {MAX_DIMENSIONS}); "
            "the neighbor estimator is unreliable past that"
        )
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, n-1] = [1, {n - 1}], got {k}")

    rng = rng_from(seed)
    jittered = x + rng.uniform(-JITTER, JITTER, size=x.shape)
    tree = cKDTree(jittered)
    # k+1 neighbors: the closest is the point itself at distance 0.
    dist, _ = tree.query(jittered, k=k + 1)
    eps = np.maximum(dist[:, k], np.finfo(np.float64).tiny)
    return float(
        digamma(n) - digamma(k) + _log_unit_ball_volume(d) + d * np.mean(np.log(eps))
    )


def conditional_entropy(
    x: np.ndarray,
    target_cols,
    known_cols,
    k: int = DEFAULT_K,
    seed: int = 0,
) -> float:
    """H(target | known) ~= H(target, known) - H(known), in nats.

    With an empty known set this is the plain entropy of the target
    columns.  The dimension cap applies to the larger, joint estimate.
    """
    x = check_matrix(x, "x", min_rows=2)
    target_cols = [int(c) for c in np.atleast_1d(np.asarray(target_cols, dtype=np.intp))]
    known_cols = [int(c) for c in np.atleast_1d(np.asarray(known_cols, dtype=np.intp))]
    if not target_cols:
        raise ValueError("need at least one target column")
    if set(target_cols) & set(known_cols):
        raise ValueError("target and known column sets overlap")

    joint = kl_entropy(x[:, target_cols + known_cols], k=k, seed=derive_seed(seed, "joint"))
    if not known_cols:
        return joint
    known = kl_entropy(x[:, known_cols], k=k, seed=derive_seed(seed, "known"))
    return joint - known
