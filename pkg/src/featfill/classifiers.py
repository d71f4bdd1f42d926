"""Binary classifiers used to measure how much an imputation costs.

Six families, each hand-rolled on numpy: regularized logistic regression,
Gaussian naive Bayes, k-nearest neighbors, a small neural net, bagged
random forests, and logistic-loss boosted trees.  All share the same
surface: ``fit(X, y)`` with 0/1 labels, ``predict(X)`` returning 0/1, and
deterministic behavior for a fixed seed.  Probability ties at the decision
threshold resolve to label 0 everywhere.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .imputers.gbt import BOOST_SPACE
from .imputers.net import NET_DEFAULTS, NET_SPACE, net_from_params
from .preprocessing import StandardizationParams
from .search import Choice, LogUniform, randomized_search
from .trees import RegressionTree
from .util import check_labels, check_matrix, derive_seed, rng_from

#: Family tags in their fixed reporting/tie-break order.
FAMILY_ORDER = ("LR", "MLP", "KNN", "NB", "GBT", "RF")


def accuracy(labels_true, labels_pred) -> float:
    """Fraction of exact label matches."""
    t = np.asarray(labels_true).ravel()
    p = np.asarray(labels_pred).ravel()
    if t.shape[0] != p.shape[0] or t.shape[0] == 0:
        raise ValueError(f"label lengths differ or are empty: {t.shape[0]} vs {p.shape[0]}")
    return float(np.mean(t == p))


def _check_training(x, y):
    x = check_matrix(x, "X", min_rows=2)
    y = check_labels(y, n_rows=x.shape[0])
    if np.unique(y).shape[0] < 2:
        raise ValueError("training data holds a single class")
    return x, y


class _FittedMixin:
    _fitted_attr = ""

    def _require_fitted(self):
        if not hasattr(self, self._fitted_attr):
            raise NotFittedError(f"{type(self).__name__} is not fitted; call fit first")

    def _check_predict(self, x):
        self._require_fitted()
        x = check_matrix(x, "X", min_rows=0)
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {x.shape[1]}")
        return x


class LogisticClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """L2-regularized logistic regression by plain gradient descent.

    The step size is the inverse of the loss gradient's Lipschitz bound,
    computed from the largest eigenvalue of the Gram matrix, so descent
    never needs a line search.  The intercept is unpenalized.  Features
    are standardized internally so the penalty weighs columns equally.
    """

    family = "LR"
    _fitted_attr = "coefs_"

    def __init__(self, penalty=1.0, max_iter=500, tol=1e-6):
        self.penalty = penalty
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        x, y = _check_training(X, y)
        if self.penalty < 0:
            raise ValueError(f"penalty must be >= 0, got {self.penalty}")
        self.standardization_ = StandardizationParams.fit(x)
        z = self.standardization_.apply(x)
        n, p = z.shape
        self.n_features_ = p

        aug = np.hstack([z, np.ones((n, 1))])
        lipschitz = float(np.linalg.eigvalsh(aug.T @ aug)[-1]) / (4.0 * n) + self.penalty
        step = 1.0 / lipschitz
        w = np.zeros(p + 1)
        converged = False
        for _ in range(int(self.max_iter)):
            prob = expit(aug @ w)
            grad = aug.T @ (prob - y) / n
            grad[:p] += self.penalty * w[:p]
            if np.max(np.abs(grad)) < self.tol:
                converged = True
                break
            w -= step * grad
        if not converged:
            warnings.warn(
                f"logistic regression stopped after {self.max_iter} iterations "
                "without meeting the gradient tolerance",
                stacklevel=2,
            )
        self.coefs_ = w[:p]
        self.intercept_ = float(w[p])
        return self

    def decision_function(self, X) -> np.ndarray:
        x = self._check_predict(X)
        return self.standardization_.apply(x) @ self.coefs_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0.0).astype(np.int64)


class GaussianNBClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """Per-class, per-feature Gaussian likelihoods with a variance floor."""

    family = "NB"
    _fitted_attr = "means_"

    def __init__(self, var_floor=1e-9):
        self.var_floor = var_floor

    def fit(self, X, y):
        x, y = _check_training(X, y)
        self.n_features_ = x.shape[1]
        self.log_priors_ = np.empty(2)
        self.means_ = np.empty((2, x.shape[1]))
        self.variances_ = np.empty((2, x.shape[1]))
        for cls in (0, 1):
            rows = x[y == cls]
            self.log_priors_[cls] = np.log(rows.shape[0] / x.shape[0])
            self.means_[cls] = rows.mean(axis=0)
            self.variances_[cls] = np.maximum(rows.var(axis=0), self.var_floor)
        return self

    def _log_posterior(self, x) -> np.ndarray:
        out = np.empty((x.shape[0], 2))
        for cls in (0, 1):
            var = self.variances_[cls]
            out[:, cls] = self.log_priors_[cls] - 0.5 * np.sum(
                np.log(2.0 * np.pi * var) + (x - self.means_[cls]) ** 2 / var, axis=1
            )
        return out

    def predict(self, X) -> np.ndarray:
        x = self._check_predict(X)
        # argmax takes the first maximum, so exact ties go to label 0.
        return np.argmax(self._log_posterior(x), axis=1).astype(np.int64)


class KNNClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """Majority vote of the k nearest standardized training rows.

    Neighbor ranking sorts by (distance, label, training index) so equal
    distances are resolved deterministically; vote ties go to label 0.
    """

    family = "KNN"
    _fitted_attr = "train_"

    def __init__(self, k=5):
        self.k = k

    def fit(self, X, y):
        x, y = _check_training(X, y)
        if not 1 <= self.k <= x.shape[0]:
            raise ValueError(f"k must lie in [1, {x.shape[0]}], got {self.k}")
        self.standardization_ = StandardizationParams.fit(x)
        self.train_ = self.standardization_.apply(x)
        self.labels_ = y
        self.n_features_ = x.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        x = self._check_predict(X)
        z = self.standardization_.apply(x)
        sq = (
            np.sum(z**2, axis=1)[:, None]
            - 2.0 * z @ self.train_.T
            + np.sum(self.train_**2, axis=1)[None, :]
        )
        dist = np.sqrt(np.maximum(sq, 0.0))
        idx = np.arange(self.train_.shape[0])
        out = np.empty(x.shape[0], dtype=np.int64)
        for row in range(x.shape[0]):
            order = np.lexsort((idx, self.labels_, dist[row]))[: self.k]
            ones = int(np.sum(self.labels_[order]))
            out[row] = 1 if 2 * ones > self.k else 0
        return out


class NetClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """Sigmoid-output neural net on standardized features."""

    family = "MLP"
    _fitted_attr = "net_"

    def __init__(self, params=None, seed=0):
        self.params = params
        self.seed = seed

    def fit(self, X, y):
        x, y = _check_training(X, y)
        self.standardization_ = StandardizationParams.fit(x)
        self.n_features_ = x.shape[1]
        self.net_ = net_from_params(
            dict(self.params) if self.params else dict(NET_DEFAULTS),
            "binary",
            derive_seed(self.seed, "net"),
        )
        self.net_.fit(self.standardization_.apply(x), y.astype(np.float64))
        return self

    def predict(self, X) -> np.ndarray:
        x = self._check_predict(X)
        return self.net_.predict(self.standardization_.apply(x))


class RandomForestClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """Bootstrap-bagged trees voting on the class.

    Each tree trains on a bootstrap resample and considers a fresh random
    subset of floor(sqrt(p)) columns at every node (``max_features=None``
    disables subsetting).  A tree votes 1 when its leaf mean exceeds 0.5;
    forest vote ties go to label 0.
    """

    family = "RF"
    _fitted_attr = "trees_"

    def __init__(self, n_trees=100, max_depth=None, max_features="sqrt", seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y):
        x, y = _check_training(X, y)
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {self.n_trees}")
        p = x.shape[1]
        if self.max_features == "sqrt":
            per_node = max(1, int(np.sqrt(p)))
        elif self.max_features is None:
            per_node = None
        else:
            per_node = int(self.max_features)
        self.n_features_ = p
        yf = y.astype(np.float64)
        self.trees_ = []
        for t in range(int(self.n_trees)):
            rng = rng_from(derive_seed(self.seed, "tree", t))
            rows = rng.integers(0, x.shape[0], x.shape[0])
            tree = RegressionTree(
                max_depth=self.max_depth, max_features=per_node, rng=rng
            )
            self.trees_.append(tree.fit(x[rows], yf[rows]))
        return self

    def predict(self, X) -> np.ndarray:
        x = self._check_predict(X)
        votes = np.zeros(x.shape[0], dtype=np.int64)
        for tree in self.trees_:
            votes += tree.predict(x) > 0.5
        return (2 * votes > len(self.trees_)).astype(np.int64)


class BoostedTreesClassifier(_FittedMixin, BaseEstimator, ClassifierMixin):
    """Logistic-loss boosting over regression trees.

    Trees fit the residual y - p with squared-error splits; each leaf then
    takes the Newton value sum(residual) / sum(p(1-p)) over its rows, and
    the damped tree is added to the log-odds score.  Fully deterministic:
    no row or feature sampling.
    """

    family = "GBT"
    _fitted_attr = "trees_"

    def __init__(self, n_estimators=100, learning_rate=0.1, max_depth=3):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth

    def fit(self, X, y):
        x, y = _check_training(X, y)
        if self.n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {self.n_estimators}")
        self.n_features_ = x.shape[1]
        positive = float(np.clip(np.mean(y), 1e-12, 1.0 - 1e-12))
        self.base_score_ = float(np.log(positive / (1.0 - positive)))
        score = np.full(x.shape[0], self.base_score_)
        yf = y.astype(np.float64)
        self.trees_ = []
        for _ in range(int(self.n_estimators)):
            prob = expit(score)
            residual = yf - prob
            tree = RegressionTree(max_depth=self.max_depth).fit(x, residual)
            leaves = tree.leaf_indices(x)
            leaf_ids = np.unique(leaves)
            numer = np.bincount(leaves, weights=residual, minlength=tree.value_.shape[0])
            denom = np.bincount(
                leaves, weights=prob * (1.0 - prob), minlength=tree.value_.shape[0]
            )
            tree.set_leaf_values(
                leaf_ids, numer[leaf_ids] / np.maximum(denom[leaf_ids], 1e-12)
            )
            score += self.learning_rate * tree.value_[leaves]
            self.trees_.append(tree)
        return self

    def decision_function(self, X) -> np.ndarray:
        x = self._check_predict(X)
        score = np.full(x.shape[0], self.base_score_)
        for tree in self.trees_:
            score += self.learning_rate * tree.predict(x)
        return score

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0.0).astype(np.int64)


#: Tuning spaces per family; empty means nothing to tune.
CLASSIFIER_SPACES = {
    "LR": {"penalty": LogUniform(1e-4, 1e2)},
    "MLP": dict(NET_SPACE),
    "KNN": {"k": Choice((1, 3, 5, 7, 11, 21))},
    "NB": {},
    "GBT": dict(BOOST_SPACE),
    "RF": {"n_trees": Choice((100, 300)), "max_depth": Choice((None, 8, 16))},
}


def make_classifier(family: str, params: dict | None = None, seed: int = 0):
    """Instantiate an unfitted classifier for a family tag."""
    if family not in FAMILY_ORDER:
        raise ValueError(f"unknown classifier family {family!r} (known: {FAMILY_ORDER})")
    params = dict(params or {})
    if family == "LR":
        return LogisticClassifier(**params)
    if family == "NB":
        return GaussianNBClassifier(**params)
    if family == "KNN":
        return KNNClassifier(**params)
    if family == "MLP":
        return NetClassifier(params=params or None, seed=seed)
    if family == "RF":
        return RandomForestClassifier(seed=seed, **params)
    return BoostedTreesClassifier(**params)


def _stratified_holdout(y: np.ndarray, fraction: float, seed: int):
    """Row split keeping both classes in both parts; returns (fit, val)."""
    rng = rng_from(seed)
    fit_rows, val_rows = [], []
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        perm = idx[rng.permutation(idx.shape[0])]
        n_val = int(np.floor(fraction * idx.shape[0] + 0.5))
        n_val = min(max(n_val, 1), idx.shape[0] - 1)
        val_rows.append(perm[:n_val])
        fit_rows.append(perm[n_val:])
    return np.sort(np.concatenate(fit_rows)), np.sort(np.concatenate(val_rows))


def train_classifier(
    family: str,
    x: np.ndarray,
    y: np.ndarray,
    seed: int = 0,
    search_trials: int = 20,
    params: dict | None = None,
):
    """Tune (when the family has a space and no params were given) and fit.

    Tuning scores validation accuracy on a stratified 80/20 holdout of the
    training rows; the winner is refit on all rows.
    """
    x, y = _check_training(x, y)
    space = CLASSIFIER_SPACES[family] if family in FAMILY_ORDER else None
    if space is None:
        raise ValueError(f"unknown classifier family {family!r} (known: {FAMILY_ORDER})")
    if params is None and space:
        if search_trials < 1:
            raise ValueError("search budget is 0 and no explicit params were given")
        fit_rows, val_rows = _stratified_holdout(y, 0.2, derive_seed(seed, "val-split"))

        def objective(candidate, trial_seed):
            model = make_classifier(family, candidate, seed=trial_seed)
            model.fit(x[fit_rows], y[fit_rows])
            return accuracy(y[val_rows], model.predict(x[val_rows]))

        result = randomized_search(
            space, objective, n_trials=search_trials, seed=derive_seed(seed, "search"),
            direction="maximize",
        )
        params = result.best_params
    model = make_classifier(family, params, seed=seed)
    model.fit(x, y)
    return model
