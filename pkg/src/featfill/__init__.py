"""Whole-feature imputation toolkit.

featfill measures how well entire missing columns of a tabular dataset can
be reconstructed from the columns that remain, and what that reconstruction
costs in downstream classification accuracy.  The package bundles:

* column orderings based on linear predictability and on conditional
  entropy (``ordering``),
* eight feature imputers behind a common fit/transform API (``imputers``),
* six binary classifiers used as downstream probes (``classifiers``),
* an experiment harness that sweeps datasets x classifiers x imputers x
  missing fractions and aggregates accuracy changes (``harness``),
* a synthetic dataset generator with tunable class structure
  (``synthetic``), and
* a command line front end (``featfill`` console script).

Typical programmatic use::

    import featfill as ff

    ds = ff.generate_synthetic(1000, 10, 7, 3, seed=0)
    train, test = ff.split(ds, 0.7, seed=1)
    mask = ff.FeatureMask((2, 5), fraction=0.2)
    model = ff.fit_imputer("knn", train, mask)
    filled = ff.impute(model, test.features)
"""

from .classifiers import FAMILY_ORDER, accuracy, make_classifier, train_classifier
from .correlation import multiple_correlation
from .data import (
    DataError,
    Dataset,
    FeatureMask,
    load_csv,
    make_masks,
    save_csv,
    split,
)
from .entropy import DimensionLimitError, conditional_entropy, kl_entropy
from .harness import (
    CellResult,
    ExperimentReport,
    emit_report,
    impute_test_features,
    raw_cells_csv,
    run_experiment,
    select_top_models,
)
from .imputers import METHODS, fit_imputer, impute, make_imputer
from .ordering import information_order, linear_order
from .serialize import SerializationError, load_model, save_model
from .synthetic import generate_synthetic
from .util import DEFAULT_SEED, derive_seed

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "CellResult",
    "DataError",
    "Dataset",
    "DimensionLimitError",
    "ExperimentReport",
    "FAMILY_ORDER",
    "FeatureMask",
    "METHODS",
    "SerializationError",
    "accuracy",
    "conditional_entropy",
    "derive_seed",
    "emit_report",
    "fit_imputer",
    "generate_synthetic",
    "impute",
    "impute_test_features",
    "information_order",
    "kl_entropy",
    "linear_order",
    "load_csv",
    "load_model",
    "make_classifier",
    "make_imputer",
    "make_masks",
    "multiple_correlation",
    "raw_cells_csv",
    "run_experiment",
    "save_csv",
    "save_model",
    "select_top_models",
    "split",
    "train_classifier",
    "__version__",
]
