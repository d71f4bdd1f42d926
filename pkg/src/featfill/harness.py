"""End-to-end experiment protocol and report emission.

For each dataset: split once, fit every classifier once on the complete
training part, and record its accuracy on the complete test part.  Then,
for every (mask, imputer) pair: fit the imputer on the training part,
fill the masked test columns, and score every classifier on the filled
test set.  The headline number of a cell is the accuracy change in
percentage points relative to the full-data accuracy of that classifier.
Cells that fail are recorded with their error and excluded from the
mean/std aggregates, which keep their own count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from .classifiers import FAMILY_ORDER, accuracy, train_classifier
from .data import Dataset, FeatureMask, make_masks, split
from .imputers import METHODS, fit_imputer
from .util import derive_seed

TRAIN_FRACTION = 0.7


@dataclass(frozen=True)
class CellResult:
    """One (dataset, classifier, imputer, mask) evaluation."""

    dataset: str
    classifier: str
    imputer: str
    fraction: float
    mask: FeatureMask
    accuracy_full: float
    accuracy_imputed: float
    change_pp: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def key(self) -> tuple:
        return (self.dataset, self.classifier, self.imputer, self.fraction)


@dataclass(frozen=True)
class ExperimentReport:
    cells: tuple[CellResult, ...]
    aggregates: dict
    accuracy_full: dict
    config_snapshot: dict
    seed: int = 0
    failures: int = field(default=0)


def aggregate_cells(cells) -> dict:
    """(dataset, classifier, imputer, fraction) -> (mean, std, n).

    Failed cells do not contribute values but keep the key present, so a
    grid point where everything failed still shows up (n = 0).  std is
    the n-1 sample estimator, defined as 0.0 for a single value.
    """
    groups: dict[tuple, list[float]] = {}
    for cell in cells:
        groups.setdefault(cell.key, [])
        if cell.ok:
            groups[cell.key].append(cell.change_pp)
    out = {}
    for key, values in groups.items():
        n = len(values)
        if n == 0:
            out[key] = (float("nan"), float("nan"), 0)
        elif n == 1:
            out[key] = (values[0], 0.0, 1)
        else:
            arr = np.asarray(values)
            out[key] = (float(arr.mean()), float(arr.std(ddof=1)), n)
    return out


def impute_test_features(
    train_features: np.ndarray,
    test_features: np.ndarray,
    mask: FeatureMask,
    method: str,
    seed: int,
    search_trials: int = 20,
    config: dict | None = None,
) -> np.ndarray:
    """Fit a method on complete training features and fill the masked
    columns of the test features (which are hidden before imputation)."""
    model = fit_imputer(
        method, train_features, mask, config=config, seed=seed, search_trials=search_trials
    )
    masked = np.asarray(test_features, dtype=np.float64).copy()
    if len(mask):
        masked[:, list(mask.missing_indices)] = np.nan
    return model.transform(masked)


def evaluate_cell(
    tag: str,
    train: Dataset,
    test: Dataset,
    classifier_models: dict,
    full_accuracy: dict,
    mask: FeatureMask,
    method: str,
    seed: int,
    search_trials: int = 20,
    config: dict | None = None,
    filled: np.ndarray | None = None,
    error: str | None = None,
) -> list[CellResult]:
    """Cells for one (mask, imputer) against every fitted classifier.

    ``filled`` short-circuits the imputation (already computed elsewhere,
    e.g. by a worker process) and ``error`` records a failure that already
    happened; otherwise imputation runs here.  An imputation failure
    yields one error cell per classifier.
    """
    if filled is None and error is None:
        try:
            filled = impute_test_features(
                train.features, test.features, mask, method, seed, search_trials, config
            )
        except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the run
            error = f"{type(exc).__name__}: {exc}"
    cells = []
    for family, model in classifier_models.items():
        full = full_accuracy[family]
        if error is None:
            imputed = accuracy(test.labels, model.predict(filled))
            cells.append(
                CellResult(
                    dataset=tag,
                    classifier=family,
                    imputer=method,
                    fraction=mask.fraction,
                    mask=mask,
                    accuracy_full=full,
                    accuracy_imputed=imputed,
                    change_pp=(imputed - full) * 100.0,
                )
            )
        else:
            cells.append(
                CellResult(
                    dataset=tag,
                    classifier=family,
                    imputer=method,
                    fraction=mask.fraction,
                    mask=mask,
                    accuracy_full=full,
                    accuracy_imputed=float("nan"),
                    change_pp=float("nan"),
                    error=error,
                )
            )
    return cells


def _impute_task(args):
    """Worker for parallel cell execution; returns (index, filled, error)."""
    index, train_features, test_features, mask, method, seed, search_trials, config = args
    try:
        return index, impute_test_features(
            train_features, test_features, mask, method, seed, search_trials, config
        ), None
    except Exception as exc:  # noqa: BLE001
        return index, None, f"{type(exc).__name__}: {exc}"


def _validate_grid(classifiers, imputers, fractions):
    bad = [f for f in classifiers if f not in FAMILY_ORDER]
    if bad or not classifiers:
        raise ValueError(f"unknown or empty classifier families: {bad or '(none given)'}")
    bad = [m for m in imputers if m not in METHODS]
    if bad or not imputers:
        raise ValueError(f"unknown or empty imputer methods: {bad or '(none given)'}")
    for f in fractions:
        if not 0.0 < f <= 0.5:
            raise ValueError(f"fractions must lie in (0, 0.5], got {f}")


def run_experiment(
    datasets: list,
    classifiers: list,
    imputers: list,
    fractions: list,
    n_masks: int,
    seed: int,
    search_trials: int = 20,
    imputer_config: dict | None = None,
    jobs: int = 1,
) -> ExperimentReport:
    """Run the full grid.  An empty ``fractions`` list means single-feature
    mode: one singleton mask per feature instead of sampled masks.

    Deterministic for a fixed seed at any ``jobs`` value: each cell's seed
    derives from (seed, dataset, fraction, mask, method) alone.
    """
    _validate_grid(classifiers, imputers, list(fractions))
    if not datasets:
        raise ValueError("no datasets given")
    tags = [ds.source_tag or f"dataset-{i}" for i, ds in enumerate(datasets)]
    if len(set(tags)) != len(tags):
        raise ValueError(f"duplicate dataset tags: {tags}")

    all_cells: list[CellResult] = []
    full_acc_map: dict = {}
    for tag, ds in zip(tags, datasets):
        pair = split(ds, TRAIN_FRACTION, derive_seed(seed, tag, "split"))
        models = {}
        full_accuracy = {}
        for family in classifiers:
            model = train_classifier(
                family,
                pair.train.features,
                pair.train.labels,
                seed=derive_seed(seed, tag, "classifier", family),
                search_trials=search_trials,
            )
            models[family] = model
            full_accuracy[family] = accuracy(pair.test.labels, model.predict(pair.test.features))
            full_acc_map[(tag, family)] = full_accuracy[family]

        masks = make_masks(
            ds.n_features,
            list(fractions) or None,
            n_masks_per_fraction=n_masks,
            seed=derive_seed(seed, tag, "masks"),
        )
        grid = [(mask, method) for mask in masks for method in imputers]
        tasks = []
        for index, (mask, method) in enumerate(grid):
            cell_seed = derive_seed(seed, tag, mask.fraction, mask.key(), method)
            config = (imputer_config or {}).get(method)
            tasks.append(
                (
                    index,
                    pair.train.features,
                    pair.test.features,
                    mask,
                    method,
                    cell_seed,
                    search_trials,
                    config,
                )
            )

        filled_by_index: dict[int, tuple] = {}
        if jobs > 1 and len(tasks) > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
                for index, filled, error in pool.map(_impute_task, tasks):
                    filled_by_index[index] = (filled, error)
        else:
            for task in tasks:
                index, filled, error = _impute_task(task)
                filled_by_index[index] = (filled, error)

        ordered_models = {f: models[f] for f in classifiers}
        for index, (mask, method) in enumerate(grid):
            filled, error = filled_by_index[index]
            all_cells.extend(
                evaluate_cell(
                    tag,
                    pair.train,
                    pair.test,
                    ordered_models,
                    full_accuracy,
                    mask,
                    method,
                    seed=0,
                    filled=filled,
                    error=error,
                )
            )

    cells = tuple(all_cells)
    snapshot = {
        "datasets": ",".join(tags),
        "classifiers": ",".join(classifiers),
        "methods": ",".join(imputers),
        "fractions": ",".join(repr(f) for f in fractions),
        "n_masks": str(n_masks),
        "seed": str(seed),
        "search_trials": str(search_trials),
    }
    return ExperimentReport(
        cells=cells,
        aggregates=aggregate_cells(cells),
        accuracy_full=full_acc_map,
        config_snapshot=snapshot,
        seed=seed,
        failures=sum(1 for c in cells if not c.ok),
    )


def select_top_models(report: ExperimentReport, dataset: str, n: int) -> list[str]:
    """Best-n classifier families by full-data accuracy on a dataset;
    exact ties prefer the family earlier in the fixed reporting order."""
    scores = {
        family: acc for (tag, family), acc in report.accuracy_full.items() if tag == dataset
    }
    if not scores:
        raise ValueError(f"unknown dataset tag {dataset!r}")
    ranked = sorted(scores, key=lambda f: (-scores[f], FAMILY_ORDER.index(f)))
    return ranked[: max(0, n)]


# -- report emission ----------------------------------------------------


def format_2dp(value: float) -> str:
    """Two decimals, half-even; normalizes negative zero away."""
    text = str(Decimal(value).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))
    return "0.00" if text == "-0.00" else text


def _first_seen(values):
    return list(dict.fromkeys(values))


def _ordered_keys(report: ExperimentReport):
    """Row/column orderings for the emitters.

    The config snapshot (when present) fixes the order the user asked for;
    otherwise fall back to first appearance among the cells, so a report
    rebuilt from raw_cells.csv matches the original run.
    """
    snapshot = report.config_snapshot
    datasets = [t for t in snapshot.get("datasets", "").split(",") if t]
    families = [t for t in snapshot.get("classifiers", "").split(",") if t]
    methods = [t for t in snapshot.get("methods", "").split(",") if t]
    cells = report.cells
    seen_d = datasets or _first_seen(c.dataset for c in cells)
    seen_c = families or _first_seen(c.classifier for c in cells)
    seen_m = methods or _first_seen(c.imputer for c in cells)
    for key in report.aggregates:
        if key[0] not in seen_d:
            seen_d.append(key[0])
        if key[1] not in seen_c:
            seen_c.append(key[1])
        if key[2] not in seen_m:
            seen_m.append(key[2])
    fractions = sorted({k[3] for k in report.aggregates})
    return seen_d, seen_c, seen_m, fractions


def emit_report(report: ExperimentReport, format: str = "csv") -> str:
    """Aggregate table as csv (full precision, snapshot in # comments) or
    markdown (paper-style tables, 2-decimal half-even rendering)."""
    if format == "csv":
        return _emit_csv(report)
    if format == "markdown":
        return _emit_markdown(report)
    raise ValueError(f"unknown report format {format!r} (use 'csv' or 'markdown')")


def _emit_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    for key in sorted(report.config_snapshot):
        buf.write(f"# {key}={report.config_snapshot[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["dataset", "classifier", "imputer", "fraction", "mean_change_pp", "std_change_pp", "n"]
    )
    datasets, families, methods, fractions = _ordered_keys(report)
    for ds in datasets:
        for family in families:
            for method in methods:
                for fraction in fractions:
                    key = (ds, family, method, fraction)
                    if key not in report.aggregates:
                        continue
                    mean, std, n = report.aggregates[key]
                    writer.writerow(
                        [ds, family, method, repr(fraction), repr(mean), repr(std), n]
                    )
    return buf.getvalue()


def parse_report_csv(text: str) -> tuple[dict, dict]:
    """Inverse of the csv emitter: (aggregates, config_snapshot)."""
    snapshot = {}
    rows = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            snapshot[key] = value
        elif line:
            rows.append(line)
    aggregates = {}
    reader = csv.reader(io.StringIO("\n".join(rows)))
    header = next(reader)
    expected = ["dataset", "classifier", "imputer", "fraction", "mean_change_pp", "std_change_pp", "n"]
    if header != expected:
        raise ValueError(f"unexpected report header: {header}")
    for row in reader:
        ds, family, method, fraction, mean, std, n = row
        aggregates[(ds, family, method, float(fraction))] = (float(mean), float(std), int(n))
    return aggregates, snapshot


def _aggregate_text(report: ExperimentReport, key) -> str:
    if key not in report.aggregates:
        return "-"
    mean, std, n = report.aggregates[key]
    if n == 0:
        return "FAILED"
    return f"{format_2dp(mean)} ± {format_2dp(std)}"


def _emit_markdown(report: ExperimentReport) -> str:
    datasets, families, methods, fractions = _ordered_keys(report)
    lines: list[str] = []
    single_mode = fractions == [0.0]
    for ds in datasets:
        if single_mode:
            lines.append(f"## {ds} (single missing feature)")
            lines.append("")
            lines.append("| method | " + " | ".join(families) + " |")
            lines.append("|---" * (len(families) + 1) + "|")
            for method in methods:
                row = [
                    _aggregate_text(report, (ds, family, method, 0.0)) for family in families
                ]
                lines.append(f"| {method} | " + " | ".join(row) + " |")
            lines.append("")
            continue
        for family in families:
            lines.append(f"## {ds} / {family}")
            lines.append("")
            heads = [f"{int(round(f * 100))}%" for f in fractions]
            lines.append("| method | " + " | ".join(heads) + " |")
            lines.append("|---" * (len(heads) + 1) + "|")
            for method in methods:
                row = [
                    _aggregate_text(report, (ds, family, method, fraction))
                    for fraction in fractions
                ]
                lines.append(f"| {method} | " + " | ".join(row) + " |")
            lines.append("")
    return "\n".join(lines)


def raw_cells_csv(report: ExperimentReport) -> str:
    """Per-cell values at full precision; byte-stable across identical runs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "dataset",
            "classifier",
            "imputer",
            "fraction",
            "mask",
            "accuracy_full",
            "accuracy_imputed",
            "change_pp",
            "error",
        ]
    )
    for cell in report.cells:
        writer.writerow(
            [
                cell.dataset,
                cell.classifier,
                cell.imputer,
                repr(cell.fraction),
                cell.mask.key(),
                repr(cell.accuracy_full),
                repr(cell.accuracy_imputed),
                repr(cell.change_pp),
                cell.error or "",
            ]
        )
    return buf.getvalue()


def read_raw_cells(text: str) -> list[CellResult]:
    """Inverse of :func:`raw_cells_csv` (enough to re-aggregate)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[:4] != ["dataset", "classifier", "imputer", "fraction"]:
        raise ValueError(f"unexpected raw-cells header: {header}")
    cells = []
    for row in reader:
        ds, family, method, fraction, mask_key, full, imputed, change, error = row
        indices = tuple(int(i) for i in mask_key.split("|")) if mask_key != "-" else ()
        cells.append(
            CellResult(
                dataset=ds,
                classifier=family,
                imputer=method,
                fraction=float(fraction),
                mask=FeatureMask(indices, float(fraction)),
                accuracy_full=float(full),
                accuracy_imputed=float(imputed),
                change_pp=float(change),
                error=error or None,
            )
        )
    return cells
