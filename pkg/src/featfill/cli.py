"""Command-line entry point.

Subcommands: generate, experiment, impute, train-imputer,
train-classifier, report.  Exit codes: 0 success, 2 validation error,
3 experiment finished with failed cells, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from .classifiers import FAMILY_ORDER, train_classifier
from .config import (
    ConfigError,
    build_run_config,
    load_dataset_spec,
    parse_config_text,
    parse_synthetic_spec,
    snapshot_lines,
)
from .data import DataError, Dataset, FeatureMask, load_csv, save_csv
from .harness import (
    ExperimentReport,
    aggregate_cells,
    emit_report,
    raw_cells_csv,
    read_raw_cells,
    run_experiment,
)
from .imputers import METHODS, fit_imputer
from .serialize import SerializationError, load_model, save_model
from .util import DEFAULT_SEED

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARTIAL = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featfill",
        description="Impute entirely-missing features and measure the classification cost.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset CSV")
    p.add_argument("spec", help="rows,informative,redundant (e.g. 4000,7,3)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("experiment", help="run the full imputation-impact grid")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--datasets", help="semicolon-separated dataset specs")
    p.add_argument("--methods", help="comma-separated imputer tags")
    p.add_argument("--classifiers", help="comma-separated classifier tags")
    p.add_argument("--fractions", help="comma-separated mask fractions ('' = single-feature)")
    p.add_argument("--n-masks", type=int, dest="n_masks")
    p.add_argument("--seed", type=int)
    p.add_argument("--search-trials", type=int, dest="search_trials")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("impute", help="fill declared-missing columns of a CSV")
    p.add_argument("--model", required=True, help="serialized imputer model")
    p.add_argument("--input", required=True, help="CSV holding only the known feature columns")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("train-imputer", help="fit one imputer and save it")
    p.add_argument("--data", required=True, help="complete training CSV")
    p.add_argument("--label", required=True, help="label column name")
    p.add_argument("--merge-rule", dest="merge_rule", help="optional label merge rule")
    p.add_argument("--method", required=True, choices=sorted(METHODS))
    p.add_argument("--missing", required=True, help="comma-separated missing feature names")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--search-trials", type=int, dest="search_trials", default=20)
    p.add_argument("--out", required=True, help="output model path")

    p = sub.add_parser("train-classifier", help="fit one classifier and save it")
    p.add_argument("--data", required=True, help="training CSV")
    p.add_argument("--label", required=True, help="label column name")
    p.add_argument("--merge-rule", dest="merge_rule", help="optional label merge rule")
    p.add_argument("--family", required=True, choices=list(FAMILY_ORDER))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--search-trials", type=int, dest="search_trials", default=20)
    p.add_argument("--out", required=True, help="output model path")

    p = sub.add_parser("report", help="rebuild report tables from raw cells")
    p.add_argument("--raw", required=True, help="raw_cells.csv from an experiment run")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _cmd_generate(args) -> int:
    parse_synthetic_spec(args.spec)
    ds = load_dataset_spec(f"synthetic:{args.spec}", args.seed)
    save_csv(ds, args.out)
    print(f"wrote {ds.n_rows} rows x {ds.n_features + 1} columns ({ds.source_tag}) to {args.out}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    values = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            values = parse_config_text(fh.read(), source=args.config)
    for key in ("datasets", "methods", "classifiers", "fractions"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    for key in ("n_masks", "seed", "search_trials"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = str(flag)
    if args.out is not None:
        values["output_dir"] = args.out
    config = build_run_config(values)

    datasets = [load_dataset_spec(spec, config.seed) for spec in config.datasets]
    print(f"loaded {len(datasets)} dataset(s): " + ", ".join(d.source_tag for d in datasets))
    report = run_experiment(
        datasets=datasets,
        classifiers=config.classifiers,
        imputers=config.methods,
        fractions=config.fractions,
        n_masks=config.n_masks,
        seed=config.seed,
        search_trials=config.search_trials,
        jobs=max(1, args.jobs),
    )

    os.makedirs(config.output_dir, exist_ok=True)
    outputs = {
        "report.csv": emit_report(report, "csv"),
        "report.md": emit_report(report, "markdown"),
        "raw_cells.csv": raw_cells_csv(report),
        "config_snapshot.txt": snapshot_lines(config) + "\n",
    }
    for name, text in outputs.items():
        with open(os.path.join(config.output_dir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {os.path.join(config.output_dir, name)}")
    print(f"{len(report.cells)} cells, {report.failures} failed")
    return EXIT_PARTIAL if report.failures else EXIT_OK


def _read_feature_csv(path) -> tuple[list[str], np.ndarray]:
    """Feature-only CSV (header + float cells), no label column."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = []
        for row_no, record in enumerate(reader, start=2):
            if not record or (len(record) == 1 and record[0].strip() == ""):
                continue
            if len(record) != len(header):
                raise DataError(
                    f"{path}: row {row_no} has {len(record)} cells, expected {len(header)}"
                )
            try:
                rows.append([float(cell) for cell in record])
            except ValueError as exc:
                raise DataError(f"{path}: row {row_no}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, np.asarray(rows, dtype=np.float64)


def _cmd_impute(args) -> int:
    model = load_model(args.model)
    if not hasattr(model, "transform") or not hasattr(model, "missing_"):
        raise ConfigError(f"{args.model} does not hold a fitted imputer model")
    names = getattr(model, "feature_names_", None)
    if names is None:
        raise ConfigError(
            f"{args.model} stores no feature names; it was trained outside the CLI "
            "and cannot match CSV columns"
        )
    header, known_values = _read_feature_csv(args.input)
    known_names = [names[i] for i in model.known_]
    if sorted(header) != sorted(known_names):
        missing_names = [names[i] for i in model.missing_]
        raise ConfigError(
            f"column mismatch: the model expects exactly the known columns "
            f"{known_names} (missing columns {missing_names}); the input has {header}"
        )
    full = np.full((known_values.shape[0], len(names)), np.nan)
    for pos, name in enumerate(header):
        full[:, names.index(name)] = known_values[:, pos]

    filled = model.transform(full)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names))
        for row in filled:
            writer.writerow([repr(float(v)) for v in row])
    print(f"imputed {len(model.missing_)} column(s) for {filled.shape[0]} rows into {args.out}")
    return EXIT_OK


def _load_labeled(args) -> Dataset:
    return load_csv(args.data, label_column=args.label, merge_rule=args.merge_rule)


def _resolve_missing(ds: Dataset, text: str) -> FeatureMask:
    indices = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part in ds.feature_names:
            indices.append(ds.feature_names.index(part))
        else:
            try:
                indices.append(int(part))
            except ValueError:
                raise ConfigError(
                    f"--missing entry {part!r} is neither a feature name nor an index; "
                    f"features are {list(ds.feature_names)}"
                ) from None
    if not indices:
        raise ConfigError("--missing names no features")
    return FeatureMask(tuple(indices))


def _cmd_train_imputer(args) -> int:
    ds = _load_labeled(args)
    mask = _resolve_missing(ds, args.missing)
    model = fit_imputer(
        args.method, ds, mask, seed=args.seed, search_trials=args.search_trials
    )
    save_model(model, args.out)
    missing_names = [ds.feature_names[i] for i in mask.missing_indices]
    print(
        f"fitted {args.method} for missing columns {missing_names} "
        f"on {ds.n_rows} rows; saved to {args.out}"
    )
    return EXIT_OK


def _cmd_train_classifier(args) -> int:
    ds = _load_labeled(args)
    model = train_classifier(
        args.family, ds.features, ds.labels, seed=args.seed, search_trials=args.search_trials
    )
    model.feature_names_ = ds.feature_names
    save_model(model, args.out)
    print(f"fitted {args.family} on {ds.n_rows} rows; saved to {args.out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    with open(args.raw, "r", encoding="utf-8") as fh:
        cells = read_raw_cells(fh.read())
    if not cells:
        raise ConfigError(f"{args.raw} holds no cells")
    full_acc = {}
    for cell in cells:
        full_acc.setdefault((cell.dataset, cell.classifier), cell.accuracy_full)
    report = ExperimentReport(
        cells=tuple(cells),
        aggregates=aggregate_cells(cells),
        accuracy_full=full_acc,
        config_snapshot={},
        failures=sum(1 for c in cells if not c.ok),
    )
    os.makedirs(args.out, exist_ok=True)
    for name, fmt in (("report.csv", "csv"), ("report.md", "markdown")):
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(emit_report(report, fmt))
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "experiment": _cmd_experiment,
    "impute": _cmd_impute,
    "train-imputer": _cmd_train_imputer,
    "train-classifier": _cmd_train_classifier,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DataError, SerializationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
