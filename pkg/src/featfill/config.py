"""Flat key=value run configuration for the experiment command.

Grammar: one ``key = value`` pair per line; blank lines and lines starting
with ``#`` are ignored; whitespace around keys and values is trimmed.
List values are comma-separated, except ``datasets`` which is
semicolon-separated because dataset specs contain commas.

Dataset spec forms:

- ``synthetic:<rows>,<informative>,<redundant>`` generates a table with
  informative+redundant feature columns (seeded from the run seed).
- ``csv:<path>:<label_column>[:<merge_rule>]`` loads a CSV; the optional
  merge rule (``threshold:<t>``) binarizes a non-binary label column.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classifiers import FAMILY_ORDER
from .data import Dataset, load_csv
from .imputers import METHODS
from .synthetic import generate_synthetic
from .util import DEFAULT_SEED, derive_seed


class ConfigError(ValueError):
    """Raised for malformed or invalid run configuration."""


#: Keys accepted in a config file, with their defaults (None = required).
CONFIG_KEYS = {
    "datasets": None,
    "methods": ",".join(sorted(METHODS)),
    "classifiers": ",".join(FAMILY_ORDER),
    "fractions": "0.1,0.2,0.3,0.4,0.5",
    "n_masks": "10",
    "seed": str(DEFAULT_SEED),
    "search_trials": "20",
    "output_dir": "results",
}


@dataclass
class RunConfig:
    datasets: list[str]
    methods: list[str] = field(default_factory=lambda: sorted(METHODS))
    classifiers: list[str] = field(default_factory=lambda: list(FAMILY_ORDER))
    fractions: list[float] = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    n_masks: int = 10
    seed: int = DEFAULT_SEED
    search_trials: int = 20
    output_dir: str = "results"


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value', got {raw!r}")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(
                f"{source}:{line_no}: unknown key {key!r} (known: {', '.join(CONFIG_KEYS)})"
            )
        values[key] = value.strip()
    return values


def _split_list(value: str, sep: str = ",") -> list[str]:
    return [part.strip() for part in value.split(sep) if part.strip()]


def build_run_config(values: dict[str, str]) -> RunConfig:
    """Materialize and fully validate a config before any work starts."""
    merged = {k: v for k, v in CONFIG_KEYS.items() if v is not None}
    merged.update(values)
    if "datasets" not in merged:
        raise ConfigError("config is missing the required 'datasets' key")

    datasets = _split_list(merged["datasets"], ";")
    if not datasets:
        raise ConfigError("'datasets' must name at least one dataset spec")
    for spec in datasets:
        validate_dataset_spec(spec)

    methods = _split_list(merged["methods"])
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise ConfigError(
            f"'methods' holds unknown tags {bad} (known: {', '.join(sorted(METHODS))})"
        )
    classifiers = _split_list(merged["classifiers"])
    bad = [c for c in classifiers if c not in FAMILY_ORDER]
    if bad or not classifiers:
        raise ConfigError(
            f"'classifiers' holds unknown tags {bad} (known: {', '.join(FAMILY_ORDER)})"
        )

    try:
        fractions = [float(f) for f in _split_list(merged["fractions"])]
    except ValueError as exc:
        raise ConfigError(f"bad fraction in 'fractions': {exc}") from None
    for f in fractions:
        if not 0.0 < f <= 0.5:
            raise ConfigError(f"fractions must lie in (0, 0.5], got {f}")

    try:
        n_masks = int(merged["n_masks"])
        seed = int(merged["seed"])
        search_trials = int(merged["search_trials"])
    except ValueError as exc:
        raise ConfigError(f"bad integer value: {exc}") from None
    if n_masks < 1:
        raise ConfigError(f"n_masks must be >= 1, got {n_masks}")
    if search_trials < 1:
        raise ConfigError(f"search_trials must be >= 1, got {search_trials}")

    return RunConfig(
        datasets=datasets,
        methods=methods,
        classifiers=classifiers,
        fractions=fractions,
        n_masks=n_masks,
        seed=seed,
        search_trials=search_trials,
        output_dir=merged["output_dir"],
    )


def parse_synthetic_spec(spec: str) -> tuple[int, int, int]:
    """'rows,informative,redundant' -> validated integer triple."""
    parts = spec.split(",")
    if len(parts) != 3:
        raise ConfigError(
            f"synthetic spec must be 'rows,informative,redundant', got {spec!r}"
        )
    try:
        rows, informative, redundant = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"synthetic spec holds a non-integer: {spec!r}") from None
    if rows < 4 or informative < 3 or redundant < 0:
        raise ConfigError(f"synthetic spec out of range: {spec!r}")
    return rows, informative, redundant


def validate_dataset_spec(spec: str) -> None:
    kind, _, rest = spec.partition(":")
    if kind == "synthetic":
        parse_synthetic_spec(rest)
        return
    if kind == "csv":
        parts = rest.split(":", 2)
        if len(parts) < 2 or not parts[0] or not parts[1]:
            raise ConfigError(
                f"csv spec must be 'csv:<path>:<label_column>[:<merge_rule>]', got {spec!r}"
            )
        return
    raise ConfigError(f"unknown dataset spec kind {kind!r} in {spec!r}")


def load_dataset_spec(spec: str, seed: int) -> Dataset:
    kind, _, rest = spec.partition(":")
    if kind == "synthetic":
        rows, informative, redundant = parse_synthetic_spec(rest)
        return generate_synthetic(
            n_rows=rows,
            n_features=informative + redundant,
            n_informative=informative,
            n_redundant=redundant,
            seed=derive_seed(seed, "generate", rest),
        )
    parts = rest.split(":", 2)
    path, label = parts[0], parts[1]
    merge_rule = parts[2] if len(parts) == 3 else None
    return load_csv(path, label_column=label, merge_rule=merge_rule)


def snapshot_lines(config: RunConfig) -> str:
    """The config as the same flat key=value text the parser reads."""
    return "\n".join(
        [
            f"datasets = {';'.join(config.datasets)}",
            f"methods = {','.join(config.methods)}",
            f"classifiers = {','.join(config.classifiers)}",
            f"fractions = {','.join(repr(f) for f in config.fractions)}",
            f"n_masks = {config.n_masks}",
            f"seed = {config.seed}",
            f"search_trials = {config.search_trials}",
            f"output_dir = {config.output_dir}",
        ]
    )
