"""Common machinery for whole-feature imputers.

Every imputer is built for one fixed set of missing columns.  ``fit``
takes a complete training matrix; ``transform`` takes a matrix whose
declared columns are absent (NaN or arbitrary, they are never read) and
returns a copy with exactly those columns replaced by predictions.
Internally all models run on standardized data; the base class owns the
scaling, the column bookkeeping, and the bit-exact pass-through of known
columns, so subclasses only ever see standardized arrays and can never
touch a cell they are not allowed to.

Two prediction schemes are shared here.  The chain scheme fills columns
one at a time in a fixed order, each filled column joining the predictor
set of the later ones.  The iterative scheme first fills every column
from the known ones, then re-predicts each column from all other
columns for a few rounds.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.exceptions import NotFittedError

from ..data import FeatureMask
from ..preprocessing import StandardizationParams
from ..search import randomized_search
from ..util import check_matrix, derive_seed, rng_from

#: Fraction of the training rows held out as the tuning validation set.
VALIDATION_FRACTION = 0.2


class BaseFeatureImputer(BaseEstimator, TransformerMixin):
    """Shared fit/transform skeleton; subclasses implement the model."""

    #: Method tag, set by each subclass.
    method = ""

    def __init__(self, missing_indices, seed=0):
        self.missing_indices = missing_indices
        self.seed = seed

    # -- subclass hooks -------------------------------------------------

    def _search_space(self):
        """Hyper-parameter space, or None for methods with nothing to tune."""
        return None

    def _fit_impl(self, z: np.ndarray) -> None:
        """Train on the full standardized matrix (only called for a
        non-empty missing set)."""
        raise NotImplementedError

    def _predict_impl(self, z_known: np.ndarray) -> np.ndarray:
        """Predict the standardized missing columns (ascending index
        order) from the standardized known columns."""
        raise NotImplementedError

    # -- shared behavior ------------------------------------------------

    def fit(self, X, y=None):
        x = check_matrix(X, "X", min_rows=2)
        p = x.shape[1]
        mask = FeatureMask(tuple(int(i) for i in self.missing_indices))
        missing = np.asarray(mask.missing_indices, dtype=np.intp)
        if missing.size and int(missing.max()) >= p:
            raise ValueError(f"missing indices {mask.missing_indices} out of range for p={p}")
        if missing.size >= p:
            raise ValueError("at least one feature must stay known")
        self.n_features_ = p
        self.missing_ = missing
        self.known_ = np.asarray(sorted(set(range(p)) - set(missing.tolist())), dtype=np.intp)

        if self._search_space() is not None and missing.size:
            self.params_ = self._tune(x)
        self.standardization_ = StandardizationParams.fit(x)
        if missing.size:
            self._fit_impl(self.standardization_.apply(x))
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "standardization_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted; call fit first")
        x = check_matrix(X, "X", min_rows=1, allow_nan=True)
        if x.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} columns, got {x.shape[1]}")
        if np.isnan(x[:, self.known_]).any():
            raise ValueError("missing values found outside the declared missing columns")
        out = x.copy()
        if self.missing_.size == 0:
            return out
        z_known = self.standardization_.apply_columns(x[:, self.known_], self.known_)
        z_missing = self._predict_impl(z_known)
        z_missing = np.asarray(z_missing, dtype=np.float64)
        if z_missing.shape != (x.shape[0], self.missing_.size):
            raise RuntimeError(f"prediction shape {z_missing.shape} does not match the mask")
        out[:, self.missing_] = self.standardization_.invert_columns(z_missing, self.missing_)
        if not np.isfinite(out).all():
            raise RuntimeError("imputation produced non-finite values")
        return out

    # -- hyper-parameter tuning ----------------------------------------

    def _tune(self, x: np.ndarray) -> dict:
        """Pick params by randomized search when none were supplied.

        Each trial fits a clone (search disabled by the explicit params)
        on 80% of the rows and is scored by imputation RMSE on the held
        out 20%, with the masked columns hidden exactly as at use time.
        """
        if self.params is not None:
            return dict(self.params)
        if self.search_trials < 1:
            raise ValueError("search budget is 0 and no explicit params were given")
        space = self._search_space()

        rng = rng_from(derive_seed(self.seed, "val-split"))
        n = x.shape[0]
        perm = rng.permutation(n)
        n_val = max(1, int(round(VALIDATION_FRACTION * n)))
        if n - n_val < 2:
            raise ValueError(f"too few rows ({n}) to carve out a validation split")
        val_rows = np.sort(perm[:n_val])
        fit_rows = np.sort(perm[n_val:])
        x_fit, x_val = x[fit_rows], x[val_rows]
        truth = x_val[:, self.missing_]
        masked = x_val.copy()
        masked[:, self.missing_] = np.nan

        def objective(params, trial_seed):
            sub = clone(self)
            sub.set_params(params=dict(params), seed=trial_seed)
            sub.fit(x_fit)
            filled = sub.transform(masked)
            return float(np.sqrt(np.mean((filled[:, self.missing_] - truth) ** 2)))

        result = randomized_search(
            space,
            objective,
            n_trials=self.search_trials,
            seed=derive_seed(self.seed, "search"),
            direction="minimize",
        )
        return dict(result.best_params)


# -- scheme helpers -----------------------------------------------------
#
# fit_model(predictor_cols, target_col, slot) -> model
# predict(model, matrix_of_predictor_cols) -> values
# ``slot`` is the model's position in the scheme, for per-model seeding.


def chain_fit(known, order, fit_model) -> list:
    models = []
    predictors = list(known)
    for slot, j in enumerate(order):
        models.append(fit_model(list(predictors), int(j), slot))
        predictors.append(int(j))
    return models


def chain_predict(z_known, n_features, known, order, models, predict) -> np.ndarray:
    buf = np.zeros((z_known.shape[0], n_features))
    buf[:, known] = z_known
    predictors = list(known)
    for j, model in zip(order, models):
        buf[:, j] = predict(model, buf[:, predictors])
        predictors.append(int(j))
    return buf


def iterative_fit(p, known, missing, fit_model) -> tuple[list, list]:
    phase1 = [fit_model(list(known), int(j), slot) for slot, j in enumerate(missing)]
    phase2 = []
    for slot, j in enumerate(missing):
        others = [c for c in range(p) if c != int(j)]
        phase2.append(fit_model(others, int(j), len(missing) + slot))
    return phase1, phase2


def iterative_predict(
    z_known, n_features, known, missing, phase1, phase2, predict, n_iter, tol
) -> np.ndarray:
    buf = np.zeros((z_known.shape[0], n_features))
    buf[:, known] = z_known
    for j, model in zip(missing, phase1):
        buf[:, j] = predict(model, buf[:, known])
    for _ in range(n_iter):
        worst = 0.0
        for j, model in zip(missing, phase2):
            others = [c for c in range(n_features) if c != int(j)]
            new = predict(model, buf[:, others])
            worst = max(worst, float(np.max(np.abs(new - buf[:, j]))))
            buf[:, j] = new
        if worst < tol:
            break
    return buf
