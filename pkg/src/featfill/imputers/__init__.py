"""Whole-feature imputers and the method registry.

Eight methods fill entire missing columns from the rest of the table:

==========  ==========================================================
tag         model and scheme
==========  ==========================================================
knn         weighted donor mean from the k nearest training rows
linreg-li   least squares, chained in linear-imputability order
linreg-iter least squares, two-phase iterative re-imputation
mice        Bayesian ridge posterior draws pooled by mean
mlp         one multi-output regression net
mlp-li      per-column nets, chained in imputability order
xgb-li      per-column boosted trees, chained in imputability order
xgb-iter    per-column boosted trees, iterative re-imputation
==========  ==========================================================
"""

from __future__ import annotations

import inspect

import numpy as np

from ..data import Dataset, FeatureMask
from .base import BaseFeatureImputer
from .gbt import BoostChainImputer, BoostIterativeImputer
from .knn import KNNFeatureImputer
from .linreg import LinearChainImputer, LinearIterativeImputer
from .mice import MICEImputer
from .net import NetChainImputer, NetImputer

METHODS = {
    cls.method: cls
    for cls in (
        KNNFeatureImputer,
        LinearChainImputer,
        LinearIterativeImputer,
        MICEImputer,
        NetImputer,
        NetChainImputer,
        BoostChainImputer,
        BoostIterativeImputer,
    )
}

#: Methods whose constructor takes a search budget.
SEARCHABLE = frozenset(
    tag
    for tag, cls in METHODS.items()
    if "search_trials" in inspect.signature(cls.__init__).parameters
)


def make_imputer(
    method: str, missing_indices, seed: int = 0, search_trials: int = 20, **config
) -> BaseFeatureImputer:
    """Instantiate an unfitted imputer for a method tag."""
    if method not in METHODS:
        known = ", ".join(sorted(METHODS))
        raise ValueError(f"unknown imputer method {method!r} (known: {known})")
    if method in SEARCHABLE:
        config.setdefault("search_trials", search_trials)
    return METHODS[method](missing_indices, seed=seed, **config)


def fit_imputer(
    method: str,
    train,
    mask,
    config: dict | None = None,
    seed: int = 0,
    search_trials: int = 20,
) -> BaseFeatureImputer:
    """Fit a method on a complete training table for one feature mask.

    ``train`` may be a :class:`Dataset` (labels ignored, feature names
    remembered on the model) or a plain matrix; ``mask`` a
    :class:`FeatureMask` or a sequence of column indices.
    """
    if not isinstance(mask, FeatureMask):
        mask = FeatureMask(tuple(int(i) for i in mask))
    names = None
    if isinstance(train, Dataset):
        names = train.feature_names
        train = train.features
    model = make_imputer(
        method, mask.missing_indices, seed=seed, search_trials=search_trials, **(config or {})
    )
    model.fit(train)
    if names is not None:
        model.feature_names_ = tuple(names)
    return model


def impute(model: BaseFeatureImputer, features: np.ndarray) -> np.ndarray:
    """Fill the model's missing columns; known cells pass through untouched."""
    return model.transform(features)
