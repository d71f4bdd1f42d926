"""Exact-greedy binary regression trees on flat arrays.

One engine serves every tree-based model in the package: bagged
classification forests (0/1 targets, where squared-error impurity ranks
splits exactly like Gini), boosted regressors and classifiers (trees fit
residuals and the caller rewrites leaf values), and single regressors.

Split search is vectorized per node: each candidate column is sorted once
and prefix sums give the squared-error gain of every cut position in one
pass, so no Python loop runs over rows.
"""

from __future__ import annotations

import numpy as np

from .util import check_matrix

_NO_FEATURE = -1


class RegressionTree:
    """Least-squares binary tree with optional per-node feature sampling.

    Parameters
    ----------
    max_depth : int or None
        Depth cap; None grows until nodes are pure or unsplittable.
    min_samples_leaf : int
        Smallest row count either child may have.
    max_features : int or None
        Candidate columns sampled per node without replacement; None uses
        every column.
    rng : numpy.random.Generator or None
        Required when ``max_features`` is set.
    """

    def __init__(self, max_depth=None, min_samples_leaf=1, max_features=None, rng=None):
        if max_depth is not None and max_depth < 1:
            raise ValueError(f"max_depth must be >= 1 or None, got {max_depth}")
        if min_samples_leaf < 1:
            raise ValueError(f"min_samples_leaf must be >= 1, got {min_samples_leaf}")
        if max_features is not None and max_features < 1:
            raise ValueError(f"max_features must be >= 1 or None, got {max_features}")
        if max_features is not None and rng is None:
            raise ValueError("per-node feature sampling needs an rng")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.rng = rng

    def _best_split(self, x, y, columns):
        """Best (gain, column, threshold) over the candidate columns, or
        None when no cut separates distinct values with legal child sizes."""
        n = y.shape[0]
        m = self.min_samples_leaf
        total = np.sum(y)
        base = total * total / n
        best = None
        for col in columns:
            order = np.argsort(x[:, col], kind="stable")
            xs = x[order, col]
            prefix = np.cumsum(y[order])
            # Cut after position i-1 (left size i), for i in [m, n-m].
            sizes = np.arange(1, n)
            valid = (sizes >= m) & (sizes <= n - m) & (xs[:-1] < xs[1:])
            if not np.any(valid):
                continue
            left = prefix[:-1]
            gain = left * left / sizes + (total - left) ** 2 / (n - sizes) - base
            gain = np.where(valid, gain, -np.inf)
            i = int(np.argmax(gain))
            if best is None or gain[i] > best[0]:
                best = (float(gain[i]), int(col), float(0.5 * (xs[i] + xs[i + 1])))
        if best is None or best[0] <= 0.0:
            return None
        return best

    def fit(self, x, y):
        x = check_matrix(x, "x", min_rows=1)
        y = np.asarray(y, dtype=np.float64).ravel()
        if y.shape[0] != x.shape[0]:
            raise ValueError(f"{y.shape[0]} targets for {x.shape[0]} rows")
        p = x.shape[1]

        feature: list[int] = []
        threshold: list[float] = []
        left: list[int] = []
        right: list[int] = []
        value: list[float] = []

        def new_node():
            feature.append(_NO_FEATURE)
            threshold.append(0.0)
            left.append(_NO_FEATURE)
            right.append(_NO_FEATURE)
            value.append(0.0)
            return len(feature) - 1

        root = new_node()
        stack = [(root, np.arange(x.shape[0]), 0)]
        while stack:
            node, rows, depth = stack.pop()
            y_node = y[rows]
            value[node] = float(np.mean(y_node))
            if (
                rows.shape[0] < 2 * self.min_samples_leaf
                or (self.max_depth is not None and depth >= self.max_depth)
                or np.ptp(y_node) < 1e-15
            ):
                continue
            if self.max_features is not None and self.max_features < p:
                columns = self.rng.choice(p, size=self.max_features, replace=False)
            else:
                columns = range(p)
            split = self._best_split(x[rows], y_node, columns)
            if split is None:
                continue
            _, col, thr = split
            feature[node] = col
            threshold[node] = thr
            go_left = x[rows, col] <= thr
            left[node] = new_node()
            right[node] = new_node()
            stack.append((left[node], rows[go_left], depth + 1))
            stack.append((right[node], rows[~go_left], depth + 1))

        self.feature_ = np.asarray(feature, dtype=np.intp)
        self.threshold_ = np.asarray(threshold)
        self.left_ = np.asarray(left, dtype=np.intp)
        self.right_ = np.asarray(right, dtype=np.intp)
        self.value_ = np.asarray(value)
        self.n_features_ = p
        return self

    def _check_fitted(self):
        if not hasattr(self, "value_"):
            raise RuntimeError("tree is not fitted")

    def leaf_indices(self, x) -> np.ndarray:
        """Leaf node id reached by each row (used for leaf rewrites)."""
        self._check_fitted()
        x = check_matrix(x, "x")
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {x.shape[1]}")
        node = np.zeros(x.shape[0], dtype=np.intp)
        while True:
            internal = self.feature_[node] != _NO_FEATURE
            if not np.any(internal):
                return node
            rows = np.flatnonzero(internal)
            at = node[rows]
            go_left = x[rows, self.feature_[at]] <= self.threshold_[at]
            node[rows] = np.where(go_left, self.left_[at], self.right_[at])

    def predict(self, x) -> np.ndarray:
        return self.value_[self.leaf_indices(x)]

    def set_leaf_values(self, leaf_ids: np.ndarray, new_values: np.ndarray) -> None:
        """Overwrite the values of the given leaves (boosting leaf step)."""
        self._check_fitted()
        if np.any(self.feature_[leaf_ids] != _NO_FEATURE):
            raise ValueError("can only rewrite leaf nodes")
        self.value_[leaf_ids] = new_values


class GradientBoostedRegressor:
    """Squared-error boosting: start at the target mean, then repeatedly
    fit a shallow tree to the residuals and add a damped copy of it."""

    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=3, min_samples_leaf=1):
        if n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {n_estimators}")
        if not 0 < learning_rate <= 1:
            raise ValueError(f"learning_rate must lie in (0, 1], got {learning_rate}")
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.max_depth = max_depth
        self.min_samples_leaf = int(min_samples_leaf)

    def fit(self, x, y):
        x = check_matrix(x, "x", min_rows=1)
        y = np.asarray(y, dtype=np.float64).ravel()
        if y.shape[0] != x.shape[0]:
            raise ValueError(f"{y.shape[0]} targets for {x.shape[0]} rows")
        self.base_ = float(np.mean(y))
        self.trees_ = []
        current = np.full(y.shape[0], self.base_)
        for _ in range(self.n_estimators):
            tree = RegressionTree(
                max_depth=self.max_depth, min_samples_leaf=self.min_samples_leaf
            ).fit(x, y - current)
            self.trees_.append(tree)
            current += self.learning_rate * tree.predict(x)
        return self

    def predict(self, x) -> np.ndarray:
        if not hasattr(self, "trees_"):
            raise RuntimeError("model is not fitted")
        x = check_matrix(x, "x")
        out = np.full(x.shape[0], self.base_)
        for tree in self.trees_:
            out += self.learning_rate * tree.predict(x)
        return out
