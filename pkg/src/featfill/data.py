"""Tabular data model: datasets, CSV ingestion, splits, and feature masks.

A :class:`Dataset` is a complete column-major numeric table with binary
labels.  A :class:`FeatureMask` names the columns that are declared absent
in a test partition; masks are whole features, never individual cells.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .util import check_labels, check_matrix, rng_from


class DataError(ValueError):
    """Raised for malformed input data (parse failures, bad labels, ...)."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """An immutable (n_rows x n_features) feature matrix with 0/1 labels."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    source_tag: str = ""

    def __post_init__(self):
        try:
            feats = check_matrix(self.features, "features", min_rows=2)
            labels = check_labels(self.labels, n_rows=feats.shape[0])
        except ValueError as exc:
            raise DataError(str(exc)) from None
        names = tuple(str(n) for n in self.feature_names)
        if feats.shape[1] < 2:
            raise DataError(f"need at least 2 features, got {feats.shape[1]}")
        if len(names) != feats.shape[1]:
            raise DataError(f"{len(names)} feature names for {feats.shape[1]} columns")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate feature names: {dupes}")
        object.__setattr__(self, "features", _freeze(feats))
        object.__setattr__(self, "labels", _freeze(labels))
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, rows: np.ndarray, source_tag: str | None = None) -> "Dataset":
        """New Dataset from a row-index selection (order preserved)."""
        return Dataset(
            features=self.features[rows],
            labels=self.labels[rows],
            feature_names=self.feature_names,
            source_tag=self.source_tag if source_tag is None else source_tag,
        )

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))


@dataclass(frozen=True)
class FeatureMask:
    """Ordered set of feature indices declared missing, with the fraction
    that produced it (0.0 for single-feature mode and the empty mask)."""

    missing_indices: tuple[int, ...]
    fraction: float = 0.0

    def __post_init__(self):
        idx = tuple(int(i) for i in self.missing_indices)
        if any(i < 0 for i in idx):
            raise DataError(f"negative feature index in mask: {idx}")
        if len(set(idx)) != len(idx):
            raise DataError(f"duplicate indices in mask: {idx}")
        if not (0.0 <= self.fraction <= 0.5):
            raise DataError(f"mask fraction must lie in [0, 0.5], got {self.fraction}")
        if self.fraction > 0 and len(idx) < 1:
            raise DataError("a fraction-derived mask must name at least one feature")
        object.__setattr__(self, "missing_indices", tuple(sorted(idx)))

    def __len__(self) -> int:
        return len(self.missing_indices)

    def known_indices(self, p: int) -> tuple[int, ...]:
        missing = set(self.missing_indices)
        if any(i >= p for i in missing):
            raise DataError(f"mask indices {self.missing_indices} out of range for p={p}")
        return tuple(i for i in range(p) if i not in missing)

    def key(self) -> str:
        """Canonical string form, stable across runs (used for cell seeds)."""
        return "|".join(str(i) for i in self.missing_indices) or "-"


@dataclass(frozen=True)
class SplitPair:
    """Disjoint train/test row partition of one source dataset."""

    train: Dataset
    test: Dataset
    seed: int = field(default=0)

    def __iter__(self):
        # allow `train, test = split(...)`
        return iter((self.train, self.test))


def _parse_float_cell(text: str, row: int, col_name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"cannot parse cell (row {row}, column '{col_name}'): {text!r}") from None
    if not math.isfinite(value):
        raise DataError(f"non-finite cell (row {row}, column '{col_name}'): {text!r}")
    return value


def _labels_from_raw(raw: list[str], merge_rule: str | None) -> np.ndarray:
    if merge_rule is not None:
        if not merge_rule.startswith("threshold:"):
            raise DataError(f"unknown merge rule: {merge_rule!r} (expected 'threshold:<t>')")
        try:
            thresh = float(merge_rule.split(":", 1)[1])
        except ValueError:
            raise DataError(f"bad threshold in merge rule: {merge_rule!r}") from None
        values = []
        for row, cell in enumerate(raw, start=2):
            values.append(_parse_float_cell(cell, row, "<label>"))
        return (np.asarray(values) >= thresh).astype(np.int64)

    distinct = sorted(set(raw))
    if len(distinct) == 1:
        raise DataError(f"label column holds a single class: {distinct[0]!r}")
    if len(distinct) > 2:
        raise DataError(
            f"label column holds {len(distinct)} distinct values; "
            "binary labels required (use a merge rule to binarize)"
        )
    if set(distinct) == {"0", "1"}:
        return np.asarray([int(v) for v in raw], dtype=np.int64)
    # Two categories: lower sorted value -> 0, higher -> 1.
    mapping = {distinct[0]: 0, distinct[1]: 1}
    return np.asarray([mapping[v] for v in raw], dtype=np.int64)


def load_csv(path, label_column: str, merge_rule: str | None = None) -> Dataset:
    """Load a complete numeric CSV (header row, '.' decimals, UTF-8).

    The label column is selected by name.  With ``merge_rule="threshold:t"``
    raw labels become 1 iff >= t, else 0; without one the column must be
    binary already.  Any non-finite or unparseable feature cell is an error
    naming the offending row and column.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for row_no, record in enumerate(reader, start=2):
            if not record or (len(record) == 1 and record[0].strip() == ""):
                continue
            if len(record) != len(header):
                raise DataError(
                    f"{path}: row {row_no} has {len(record)} cells, expected {len(header)}"
                )
            raw_labels.append(record[label_idx].strip())
            parsed = []
            for i, cell in enumerate(record):
                if i == label_idx:
                    continue
                parsed.append(_parse_float_cell(cell.strip(), row_no, header[i]))
            rows.append(parsed)

    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(rows)}")
    labels = _labels_from_raw(raw_labels, merge_rule)
    if len(np.unique(labels)) < 2:
        raise DataError(f"{path}: labels hold a single class after merging")
    import os

    tag = os.path.splitext(os.path.basename(str(path)))[0]
    return Dataset(
        features=np.asarray(rows, dtype=np.float64),
        labels=labels,
        feature_names=tuple(feature_names),
        source_tag=tag,
    )


def save_csv(ds: Dataset, path, label_column: str = "label") -> None:
    """Write a Dataset back to the same CSV dialect load_csv reads."""
    if label_column in ds.feature_names:
        raise DataError(f"label column name {label_column!r} collides with a feature name")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names) + [label_column])
        for i in range(ds.n_rows):
            writer.writerow([repr(float(v)) for v in ds.features[i]] + [int(ds.labels[i])])


def _train_quota(counts, train_fraction: float) -> list[int]:
    """Per-class train-row counts: global total rounds half-up, the surplus
    over the per-class floors goes to the largest fractional remainders
    (ties to the lower class), each class clamped to keep a test row."""
    total = int(math.floor(train_fraction * sum(counts) + 0.5))
    raw = [train_fraction * c for c in counts]
    base = [int(math.floor(r)) for r in raw]
    surplus = total - sum(base)
    order = sorted(range(len(counts)), key=lambda c: (base[c] - raw[c], c))
    for c in order[:max(surplus, 0)]:
        base[c] += 1
    return [min(max(b, 1), counts[c] - 1) for c, b in enumerate(base)]


def split(ds: Dataset, train_fraction: float, seed: int) -> SplitPair:
    """Deterministic stratified train/test split.

    The train side gets round(train_fraction * n) rows overall, apportioned
    to the classes by largest remainder, so the global ratio is exact and
    per-class proportions are honored to within one row.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    counts = ds.class_counts()
    if min(counts) < 2:
        raise DataError(f"each class needs at least 2 rows, got counts {counts}")
    quota = _train_quota(counts, train_fraction)
    rng = rng_from(seed)
    train_rows: list[np.ndarray] = []
    test_rows: list[np.ndarray] = []
    for cls in (0, 1):
        idx = np.flatnonzero(ds.labels == cls)
        perm = rng.permutation(idx.shape[0])
        train_rows.append(idx[perm[: quota[cls]]])
        test_rows.append(idx[perm[quota[cls] :]])
    train_idx = np.sort(np.concatenate(train_rows))
    test_idx = np.sort(np.concatenate(test_rows))
    return SplitPair(train=ds.subset(train_idx), test=ds.subset(test_idx), seed=seed)


def mask_size(fraction: float, p: int) -> int:
    """Number of missing features for a fraction: round half-up, floor 1."""
    return max(1, int(math.floor(fraction * p + 0.5)))


def make_masks(
    p: int,
    fractions: list[float] | None = None,
    n_masks_per_fraction: int = 10,
    seed: int = 0,
) -> list[FeatureMask]:
    """Build the mask grid for an experiment.

    With ``fractions`` omitted or empty (single-feature mode) the result is
    the p singleton masks in index order.  Otherwise each fraction yields
    ``n_masks_per_fraction`` masks of size ``mask_size(fraction, p)``,
    sampled uniformly without replacement among index combinations, with
    replacement once every combination has been drawn.  Deterministic for a
    fixed seed.
    """
    if p < 2:
        raise DataError(f"need p >= 2, got {p}")
    if not fractions:
        return [FeatureMask((i,), 0.0) for i in range(p)]
    if n_masks_per_fraction < 1:
        raise DataError("n_masks_per_fraction must be >= 1")
    for f in fractions:
        if not (0.0 < f <= 0.5):
            raise DataError(f"fractions must lie in (0, 0.5], got {f}")

    rng = rng_from(seed)
    masks: list[FeatureMask] = []
    for f in fractions:
        size = mask_size(f, p)
        if size >= p:
            raise DataError(f"fraction {f} would mask {size} of {p} features")
        total = math.comb(p, size)
        seen: set[tuple[int, ...]] = set()
        taken = 0
        while taken < n_masks_per_fraction:
            combo = tuple(sorted(rng.choice(p, size=size, replace=False).tolist()))
            if combo in seen and len(seen) < total:
                continue
            seen.add(combo)
            masks.append(FeatureMask(combo, f))
            taken += 1
    return masks
