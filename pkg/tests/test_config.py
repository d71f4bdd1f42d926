"""Config grammar, validation, and dataset spec handling."""

import numpy as np
import pytest

from featfill.config import (
    ConfigError,
    RunConfig,
    build_run_config,
    load_dataset_spec,
    parse_config_text,
    parse_synthetic_spec,
    snapshot_lines,
    validate_dataset_spec,
)


def make_config(text):
    return build_run_config(parse_config_text(text))


class TestParseText:
    def test_basic_pairs_with_noise(self):
        text = (
            "# a comment\n"
            "\n"
            "datasets = synthetic:100,3,1\n"
            "  n_masks =  4  \n"
            "seed=7\n"
        )
        values = parse_config_text(text)
        assert values == {
            "datasets": "synthetic:100,3,1", "n_masks": "4", "seed": "7"
        }

    def test_unknown_key_names_the_line(self):
        with pytest.raises(ConfigError, match=r"run\.cfg:3: unknown key 'colour'"):
            parse_config_text("# x\ndatasets = y\ncolour = blue\n", source="run.cfg")

    def test_line_without_equals(self):
        with pytest.raises(ConfigError, match=":2: expected 'key = value'"):
            parse_config_text("datasets = y\njust words\n")

    def test_later_assignment_wins(self):
        values = parse_config_text("seed = 1\nseed = 2\n")
        assert values == {"seed": "2"}


class TestBuildRunConfig:
    def test_defaults_fill_everything_but_datasets(self):
        config = make_config("datasets = synthetic:200,3,2\n")
        assert config.datasets == ["synthetic:200,3,2"]
        assert config.fractions == [0.1, 0.2, 0.3, 0.4, 0.5]
        assert config.n_masks == 10
        assert config.methods == sorted(config.methods)
        assert "LR" in config.classifiers
        assert config.output_dir == "results"

    def test_datasets_required(self):
        with pytest.raises(ConfigError, match="datasets"):
            build_run_config({})

    def test_semicolon_separated_dataset_specs(self):
        config = make_config(
            "datasets = synthetic:100,3,1 ; synthetic:200,4,2\n"
        )
        assert len(config.datasets) == 2

    @pytest.mark.parametrize("line,hint", [
        ("methods = knn,magic", "unknown tags"),
        ("classifiers = LR,SVM", "unknown tags"),
        ("fractions = 0.1,whoa", "fraction"),
        ("fractions = 0.6", "0, 0.5"),
        ("fractions = 0.0", "0, 0.5"),
        ("n_masks = 0", "n_masks"),
        ("n_masks = three", "integer"),
        ("search_trials = 0", "search_trials"),
    ])
    def test_bad_values_rejected(self, line, hint):
        with pytest.raises(ConfigError, match=hint):
            make_config(f"datasets = synthetic:100,3,1\n{line}\n")

    def test_snapshot_reparses_to_the_same_config(self):
        config = make_config(
            "datasets = synthetic:150,4,2\n"
            "methods = knn,mice\n"
            "classifiers = NB,KNN\n"
            "fractions = 0.1,0.3\n"
            "n_masks = 3\n"
            "seed = 99\n"
        )
        again = make_config(snapshot_lines(config))
        assert again == config


class TestSyntheticSpec:
    def test_parses_triple(self):
        assert parse_synthetic_spec("500,7,3") == (500, 7, 3)

    @pytest.mark.parametrize("spec", ["500,7", "500,7,3,2", "a,b,c", "500,7,-1", "2,3,0"])
    def test_malformed_rejected(self, spec):
        with pytest.raises(ConfigError):
            parse_synthetic_spec(spec)

    def test_load_generates_the_described_table(self):
        ds = load_dataset_spec("synthetic:120,4,2", seed=3)
        assert ds.features.shape == (120, 6)
        assert np.unique(ds.labels).tolist() == [0, 1]

    def test_same_seed_same_table(self):
        a = load_dataset_spec("synthetic:120,4,2", seed=3)
        b = load_dataset_spec("synthetic:120,4,2", seed=3)
        assert a.features.tobytes() == b.features.tobytes()

    def test_different_specs_get_independent_tables(self):
        a = load_dataset_spec("synthetic:120,4,2", seed=3)
        b = load_dataset_spec("synthetic:120,5,1", seed=3)
        assert a.features[:, :3].tobytes() != b.features[:, :3].tobytes()


class TestCsvSpec:
    def test_well_formed_accepted(self):
        validate_dataset_spec("csv:data/table.csv:label")
        validate_dataset_spec("csv:data/table.csv:label:threshold:3")

    @pytest.mark.parametrize("spec", ["csv:", "csv:path.csv", "csv::label"])
    def test_malformed_rejected(self, spec):
        with pytest.raises(ConfigError, match="csv spec"):
            validate_dataset_spec(spec)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError, match="unknown dataset spec kind"):
            validate_dataset_spec("parquet:file.pq:y")

    def test_load_round_trips_through_file(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            "a,b,target\n1.0,2.0,0\n2.0,1.0,1\n3.0,4.0,0\n4.0,3.0,1\n"
        )
        ds = load_dataset_spec(f"csv:{path}:target", seed=0)
        assert ds.features.shape == (4, 2)
        assert ds.labels.tolist() == [0, 1, 0, 1]


class TestRunConfigDefaults:
    def test_dataclass_defaults_match_key_table(self):
        config = RunConfig(datasets=["synthetic:100,3,1"])
        assert snapshot_lines(config)  # renders without error
        assert config.seed == make_config("datasets = synthetic:100,3,1").seed
