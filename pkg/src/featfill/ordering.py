"""Greedy orderings that decide which missing feature to rebuild first.

Two scores are supported: squared multiple correlation (how well a linear
model can rebuild a column from the known ones) and negative conditional
entropy (how little uncertainty remains in a column given the known ones).
Higher score is rebuilt earlier; ties go to the lowest column index so the
order is fully deterministic.
"""

from __future__ import annotations

import numpy as np

from .correlation import multiple_correlation
from .entropy import DEFAULT_K, conditional_entropy
from .linalg import CovarianceSummary
from .util import check_matrix


def _check_split(p: int, missing) -> tuple[list[int], list[int]]:
    missing = [int(j) for j in missing]
    if not missing:
        return [], list(range(p))
    if len(set(missing)) != len(missing):
        raise ValueError(f"duplicate indices in missing set: {missing}")
    if min(missing) < 0 or max(missing) >= p:
        raise ValueError(f"missing indices {missing} out of range for p={p}")
    known = [i for i in range(p) if i not in set(missing)]
    if not known:
        raise ValueError("at least one feature must stay known")
    return missing, known


def linear_order(x: np.ndarray, missing, recalc: bool = True) -> list[int]:
    """Order the missing columns by squared multiple correlation.

    With ``recalc`` each chosen column joins the known set before the next
    round, so later choices may lean on freshly rebuilt columns.  Without
    it every score is computed once against the original known set and the
    result is a plain descending sort.
    """
    x = check_matrix(x, "x", min_rows=2)
    missing, known = _check_split(x.shape[1], missing)
    if not missing:
        return []
    cov = CovarianceSummary.fit(x)

    if not recalc:
        scores = {j: multiple_correlation(cov, j, known) for j in missing}
        return sorted(missing, key=lambda j: (-scores[j], j))

    order: list[int] = []
    remaining = list(missing)
    current = list(known)
    while remaining:
        best = min(remaining, key=lambda j: (-multiple_correlation(cov, j, current), j))
        order.append(best)
        remaining.remove(best)
        current.append(best)
    return order


def information_order(x: np.ndarray, missing, k: int = DEFAULT_K, seed: int = 0) -> list[int]:
    """Order the missing columns by conditional entropy, lowest first.

    Scores are computed once against the original known set; each score is
    a joint estimate over len(known)+1 dimensions, so the estimator's
    dimension cap limits this ordering to narrow tables.
    """
    x = check_matrix(x, "x", min_rows=2)
    missing, known = _check_split(x.shape[1], missing)
    if not missing:
        return []
    scores = {j: conditional_entropy(x, [j], known, k=k, seed=seed) for j in missing}
    return sorted(missing, key=lambda j: (scores[j], j))
