"""Command-line interface: subcommands, exit codes, file outputs."""

import csv
import subprocess
import sys

import numpy as np
import pytest

from featfill import load_csv, load_model, save_model, fit_imputer
from featfill.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main


def run(argv):
    return main([str(a) for a in argv])


class TestGenerate:
    def test_writes_a_loadable_deterministic_csv(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["generate", "60,3,1", "--seed", 5, "--out", a]) == EXIT_OK
        assert run(["generate", "60,3,1", "--seed", 5, "--out", b]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        ds = load_csv(a, label_column="label")
        assert ds.features.shape == (60, 4)

    def test_seed_matters(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["generate", "60,3,1", "--seed", 5, "--out", a])
        run(["generate", "60,3,1", "--seed", 6, "--out", b])
        assert a.read_bytes() != b.read_bytes()

    def test_malformed_spec(self, tmp_path, capsys):
        assert run(["generate", "60,3", "--out", tmp_path / "x.csv"]) == EXIT_VALIDATION
        assert "synthetic spec" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        out = tmp_path / "missing" / "deep" / "x.csv"
        assert run(["generate", "60,3,1", "--out", out]) == EXIT_IO


@pytest.fixture(scope="module")
def experiment_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("exp")
    code = run([
        "experiment", "--datasets", "synthetic:100,3,1",
        "--classifiers", "NB", "--methods", "knn",
        "--fractions", "0.25", "--n-masks", "2", "--seed", "11", "--out", out,
    ])
    assert code == EXIT_OK
    return out


class TestExperiment:
    def test_writes_all_four_files(self, experiment_dir):
        for name in ("report.csv", "report.md", "raw_cells.csv", "config_snapshot.txt"):
            assert (experiment_dir / name).is_file()

    def test_rerun_is_byte_identical(self, experiment_dir, tmp_path):
        code = run([
            "experiment", "--datasets", "synthetic:100,3,1",
            "--classifiers", "NB", "--methods", "knn",
            "--fractions", "0.25", "--n-masks", "2", "--seed", "11", "--out", tmp_path,
        ])
        assert code == EXIT_OK
        for name in ("raw_cells.csv", "report.csv", "report.md"):
            assert (tmp_path / name).read_bytes() == (experiment_dir / name).read_bytes()

    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "datasets = synthetic:100,3,1\n"
            "methods = knn,mice\n"
            "classifiers = NB\n"
            "fractions = 0.25\n"
            "n_masks = 1\n"
        )
        out = tmp_path / "res"
        assert run(["experiment", "--config", cfg, "--methods", "knn", "--out", out]) == EXIT_OK
        snapshot = (out / "config_snapshot.txt").read_text()
        assert "methods = knn\n" in snapshot
        assert "mice" not in snapshot

    def test_empty_fractions_means_single_feature_mode(self, tmp_path):
        out = tmp_path / "res"
        code = run([
            "experiment", "--datasets", "synthetic:100,3,1",
            "--classifiers", "NB", "--methods", "knn",
            "--fractions", "", "--n-masks", "1", "--out", out,
        ])
        assert code == EXIT_OK
        assert "single missing feature" in (out / "report.md").read_text()

    def test_invalid_fraction(self, tmp_path, capsys):
        code = run([
            "experiment", "--datasets", "synthetic:100,3,1",
            "--classifiers", "NB", "--methods", "knn",
            "--fractions", "0.7", "--out", tmp_path,
        ])
        assert code == EXIT_VALIDATION
        assert "0.5" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        code = run(["experiment", "--config", tmp_path / "nope.cfg"])
        assert code == EXIT_IO


@pytest.fixture(scope="module")
def table_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "table.csv"
    assert run(["generate", "80,3,1", "--seed", 3, "--out", path]) == EXIT_OK
    return path


class TestTrainImputer:
    def test_fit_save_load(self, table_csv, tmp_path):
        out = tmp_path / "knn.model.json"
        code = run([
            "train-imputer", "--data", table_csv, "--label", "label",
            "--method", "knn", "--missing", "f1,f3", "--out", out,
        ])
        assert code == EXIT_OK
        model = load_model(out)
        assert model.feature_names_ == ("f0", "f1", "f2", "f3")
        assert tuple(model.missing_) == (1, 3)

    def test_missing_by_index_works_too(self, table_csv, tmp_path):
        out = tmp_path / "m.json"
        code = run([
            "train-imputer", "--data", table_csv, "--label", "label",
            "--method", "knn", "--missing", "1,3", "--out", out,
        ])
        assert code == EXIT_OK

    def test_unknown_feature_name(self, table_csv, tmp_path, capsys):
        code = run([
            "train-imputer", "--data", table_csv, "--label", "label",
            "--method", "knn", "--missing", "banana", "--out", tmp_path / "m.json",
        ])
        assert code == EXIT_VALIDATION
        assert "banana" in capsys.readouterr().err


class TestImpute:
    @pytest.fixture()
    def model_path(self, table_csv, tmp_path):
        out = tmp_path / "model.json"
        run([
            "train-imputer", "--data", table_csv, "--label", "label",
            "--method", "linreg-li", "--missing", "f1", "--out", out,
        ])
        return out

    def write_known(self, table_csv, path, columns):
        ds = load_csv(table_csv, label_column="label")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in ds.features[:10]:
                writer.writerow([repr(float(row[ds.feature_names.index(c)])) for c in columns])

    def test_round_trip(self, table_csv, model_path, tmp_path):
        known = tmp_path / "known.csv"
        # shuffled column order: matching is by name, not position
        self.write_known(table_csv, known, ["f2", "f0", "f3"])
        out = tmp_path / "filled.csv"
        assert run(["impute", "--model", model_path, "--input", known, "--out", out]) == EXIT_OK
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["f0", "f1", "f2", "f3"]
        filled = np.array([[float(c) for c in r] for r in rows[1:]])
        ds = load_csv(table_csv, label_column="label")
        # known cells pass through bit-exactly; the missing column is filled
        np.testing.assert_array_equal(filled[:, [0, 2, 3]], ds.features[:10][:, [0, 2, 3]])
        assert np.all(np.isfinite(filled[:, 1]))

    def test_column_mismatch(self, table_csv, model_path, tmp_path, capsys):
        known = tmp_path / "known.csv"
        self.write_known(table_csv, known, ["f0", "f1", "f2"])  # f1 is the missing one
        code = run(["impute", "--model", model_path, "--input", known, "--out", tmp_path / "o.csv"])
        assert code == EXIT_VALIDATION
        assert "column mismatch" in capsys.readouterr().err

    def test_model_without_names_is_refused(self, table_csv, tmp_path, capsys):
        ds = load_csv(table_csv, label_column="label")
        model = fit_imputer("knn", ds.features, (1,))  # bare matrix: no names kept
        path = tmp_path / "bare.json"
        save_model(model, path)
        known = tmp_path / "known.csv"
        self.write_known(table_csv, known, ["f0", "f2", "f3"])
        code = run(["impute", "--model", path, "--input", known, "--out", tmp_path / "o.csv"])
        assert code == EXIT_VALIDATION
        assert "feature names" in capsys.readouterr().err

    def test_non_model_file(self, table_csv, tmp_path):
        code = run(["impute", "--model", table_csv, "--input", table_csv, "--out", tmp_path / "o.csv"])
        assert code == EXIT_VALIDATION


class TestTrainClassifier:
    def test_fit_save_load_predict(self, table_csv, tmp_path):
        out = tmp_path / "nb.json"
        code = run([
            "train-classifier", "--data", table_csv, "--label", "label",
            "--family", "NB", "--out", out,
        ])
        assert code == EXIT_OK
        model = load_model(out)
        ds = load_csv(table_csv, label_column="label")
        pred = model.predict(ds.features)
        assert set(np.unique(pred)) <= {0, 1}

    def test_unknown_family_is_a_usage_error(self, table_csv, tmp_path):
        with pytest.raises(SystemExit):
            run([
                "train-classifier", "--data", table_csv, "--label", "label",
                "--family", "SVM", "--out", tmp_path / "x.json",
            ])


class TestReport:
    def test_rebuild_matches_original_tables(self, experiment_dir, tmp_path):
        out = tmp_path / "rebuilt"
        code = run(["report", "--raw", experiment_dir / "raw_cells.csv", "--out", out])
        assert code == EXIT_OK
        assert (out / "report.md").read_bytes() == (experiment_dir / "report.md").read_bytes()

    def test_empty_raw_file(self, tmp_path, capsys):
        raw = tmp_path / "raw.csv"
        raw.write_text("dataset,classifier,imputer,fraction,mask,accuracy_full,"
                       "accuracy_imputed,change_pp,error\n")
        code = run(["report", "--raw", raw, "--out", tmp_path / "r"])
        assert code == EXIT_VALIDATION
        assert "no cells" in capsys.readouterr().err

    def test_missing_raw_file(self, tmp_path):
        assert run(["report", "--raw", tmp_path / "nope.csv", "--out", tmp_path]) == EXIT_IO


def test_console_script_is_installed(tmp_path):
    out = tmp_path / "t.csv"
    proc = subprocess.run(
        ["featfill", "generate", "24,3,0", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.is_file()
