"""Shared helpers: seed derivation and small validation utilities."""

from __future__ import annotations

import hashlib

import numpy as np

# Seed used by every CLI command when --seed is omitted.
DEFAULT_SEED = 1234


def derive_seed(*parts) -> int:
    """Derive a stable sub-seed from arbitrary key parts.

    The mapping is a SHA-256 hash of the repr of the parts, so adding new
    grid dimensions elsewhere never perturbs existing (parts -> seed)
    assignments.
    """
    key = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") % (2**63)


def check_matrix(x, name: str = "X", min_rows: int = 0, allow_nan: bool = False) -> np.ndarray:
    """Coerce to a 2-D float64 array and validate finiteness (unless allow_nan)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} rows, got {arr.shape[0]}")
    if allow_nan:
        if np.isinf(arr).any():
            raise ValueError(f"{name} contains infinite values")
    elif not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_labels(y, n_rows: int | None = None) -> np.ndarray:
    """Coerce labels to int64 and validate they are drawn from {0, 1}."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"labels must be 1-dimensional, got shape {arr.shape}")
    as_int = arr.astype(np.int64)
    if not np.array_equal(as_int, np.asarray(arr, dtype=np.float64)):
        raise ValueError("labels must be integers")
    if not np.isin(as_int, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    if n_rows is not None and as_int.shape[0] != n_rows:
        raise ValueError(f"expected {n_rows} labels, got {as_int.shape[0]}")
    return as_int


def rng_from(seed) -> np.random.Generator:
    return np.random.default_rng(seed)
