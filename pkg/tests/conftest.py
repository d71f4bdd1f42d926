import os
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def cancer_csv_path():
    """Path to a user-supplied Breast Cancer Wisconsin CSV, or None.

    Checked locations: $FEATFILL_CANCER_CSV, then data/breast_cancer_wisconsin.csv
    relative to the repository root.  The file must be pre-cleaned: header row,
    9 numeric feature columns, a binary label column named 'class', no id
    column, no unparseable cells.
    """
    env = os.environ.get("FEATFILL_CANCER_CSV")
    if env and Path(env).is_file():
        return Path(env)
    default = Path(__file__).resolve().parent.parent / "data" / "breast_cancer_wisconsin.csv"
    if default.is_file():
        return default
    return None


requires_cancer_csv = pytest.mark.skipif(
    cancer_csv_path() is None,
    reason="Breast Cancer Wisconsin CSV not provided; set FEATFILL_CANCER_CSV "
    "or place it at data/breast_cancer_wisconsin.csv (see README)",
)
