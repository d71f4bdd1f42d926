"""Behavior checks for the six classifier families."""

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from featfill.classifiers import (
    FAMILY_ORDER,
    BoostedTreesClassifier,
    GaussianNBClassifier,
    KNNClassifier,
    LogisticClassifier,
    RandomForestClassifier,
    accuracy,
    make_classifier,
    train_classifier,
)

# cheap but non-default settings so the slow families stay fast in tests
CHEAP = {
    "MLP": {"n_layers": 1, "width_1": 16, "activation": "relu",
            "learning_rate": 3e-2, "epochs": 200},
    "RF": {"n_trees": 25},
    "GBT": {"n_estimators": 40},
}


def blobs(n_per=20, spread=0.5, dim=3, seed=0):
    """Two well-separated Gaussian clusters, shuffled."""
    rng = np.random.default_rng(seed)
    x = np.vstack([
        rng.normal(-3.0, spread, (n_per, dim)),
        rng.normal(3.0, spread, (n_per, dim)),
    ])
    y = np.repeat(np.array([0, 1], dtype=np.int64), n_per)
    perm = rng.permutation(2 * n_per)
    return x[perm], y[perm]


class TestAccuracy:
    def test_all_match(self):
        assert accuracy([0, 1, 1, 0], [0, 1, 1, 0]) == 1.0

    def test_none_match(self):
        assert accuracy([0, 1, 1], [1, 0, 0]) == 0.0

    def test_partial(self):
        true = np.zeros(10, dtype=np.int64)
        pred = true.copy()
        pred[3] = 1
        assert accuracy(true, pred) == pytest.approx(0.9)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            accuracy([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            accuracy([0, 1], [0, 1, 1])


class TestSeparation:
    @pytest.mark.parametrize("family", FAMILY_ORDER)
    def test_separable_clusters_are_learned(self, family):
        x, y = blobs(seed=3)
        model = make_classifier(family, CHEAP.get(family), seed=5).fit(x, y)
        assert accuracy(y, model.predict(x)) == 1.0
        # fresh points from the same clusters land on the right side too
        x2, y2 = blobs(n_per=10, seed=4)
        assert accuracy(y2, model.predict(x2)) == 1.0

    @pytest.mark.parametrize("family", FAMILY_ORDER)
    def test_empty_predict(self, family):
        x, y = blobs(n_per=8, seed=1)
        model = make_classifier(family, CHEAP.get(family), seed=0).fit(x, y)
        out = model.predict(np.empty((0, x.shape[1])))
        assert out.shape == (0,)

    @pytest.mark.parametrize("family", FAMILY_ORDER)
    def test_predict_before_fit_rejected(self, family):
        model = make_classifier(family, CHEAP.get(family))
        with pytest.raises(NotFittedError):
            model.predict(np.zeros((2, 3)))

    @pytest.mark.parametrize("family", FAMILY_ORDER)
    def test_single_class_rejected(self, family):
        x = np.random.default_rng(0).normal(size=(10, 2))
        with pytest.raises(ValueError):
            make_classifier(family, CHEAP.get(family)).fit(x, np.zeros(10, np.int64))

    @pytest.mark.parametrize("family", FAMILY_ORDER)
    def test_wrong_width_at_predict_rejected(self, family):
        x, y = blobs(n_per=8, seed=2)
        model = make_classifier(family, CHEAP.get(family), seed=0).fit(x, y)
        with pytest.raises(ValueError, match="columns"):
            model.predict(x[:, :2])

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            make_classifier("SVM")


class TestLogistic:
    def test_two_point_problem(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1])
        model = LogisticClassifier().fit(x, y)
        assert model.predict(x).tolist() == [0, 1]
        scores = model.decision_function(x)
        assert scores[0] < 0.0 < scores[1]

    def test_negative_penalty_rejected(self):
        x, y = blobs(n_per=5)
        with pytest.raises(ValueError, match="penalty"):
            LogisticClassifier(penalty=-1.0).fit(x, y)

    def test_warns_when_stopped_early(self):
        x, y = blobs(seed=6)
        with pytest.warns(UserWarning, match="without meeting"):
            LogisticClassifier(max_iter=1).fit(x, y)


class TestGaussianNB:
    def test_fitted_moments_match_class_statistics(self):
        x, y = blobs(seed=9)
        model = GaussianNBClassifier().fit(x, y)
        for cls in (0, 1):
            rows = x[y == cls]
            np.testing.assert_allclose(model.means_[cls], rows.mean(axis=0))
            np.testing.assert_allclose(model.variances_[cls], rows.var(axis=0))

    def test_within_class_constant_feature_survives_variance_floor(self):
        x, y = blobs(seed=2)
        x = np.hstack([x, np.where(y == 1, 5.0, -5.0)[:, None]])
        model = GaussianNBClassifier().fit(x, y)
        assert accuracy(y, model.predict(x)) == 1.0

    def test_label_flip_flips_predictions(self):
        x, y = blobs(seed=12)
        q = np.random.default_rng(1).normal(0.0, 4.0, (30, x.shape[1]))
        a = GaussianNBClassifier().fit(x, y).predict(q)
        b = GaussianNBClassifier().fit(x, 1 - y).predict(q)
        assert np.array_equal(a, 1 - b)


class TestKNN:
    def test_one_neighbor_memorizes_training_rows(self):
        x, y = blobs(seed=21)
        model = KNNClassifier(k=1).fit(x, y)
        assert np.array_equal(model.predict(x), y)

    def test_vote_tie_goes_to_zero(self):
        x = np.array([[0.0, 0.0], [2.0, 2.0]])
        y = np.array([0, 1])
        model = KNNClassifier(k=2).fit(x, y)
        assert model.predict(np.array([[1.0, 1.0]]))[0] == 0

    def test_label_flip_flips_predictions(self):
        # odd k keeps every vote decisive, so flipping labels must flip output
        x, y = blobs(seed=13)
        q = np.random.default_rng(2).normal(0.0, 4.0, (30, x.shape[1]))
        a = KNNClassifier(k=3).fit(x, y).predict(q)
        b = KNNClassifier(k=3).fit(x, 1 - y).predict(q)
        assert np.array_equal(a, 1 - b)

    @pytest.mark.parametrize("k", [0, 41])
    def test_out_of_range_k_rejected(self, k):
        x, y = blobs(seed=0)
        with pytest.raises(ValueError, match="k must"):
            KNNClassifier(k=k).fit(x, y)


class TestRandomForest:
    def test_single_tree_is_fully_traceable(self):
        # at seed 1 the bootstrap draws rows [2, 1, 3, 1], whose values
        # 10, 1, 11, 1 split between label groups at the midpoint 5.5
        x = np.array([[0.0], [1.0], [10.0], [11.0]])
        y = np.array([0, 0, 1, 1])
        model = RandomForestClassifier(n_trees=1, seed=1).fit(x, y)
        assert len(model.trees_) == 1
        tree = model.trees_[0]
        assert tree.feature_[0] == 0
        assert tree.threshold_[0] == 5.5
        assert model.predict(x).tolist() == [0, 0, 1, 1]

    def test_seed_determinism(self):
        x, y = blobs(seed=30)
        q = np.random.default_rng(3).normal(0.0, 4.0, (25, x.shape[1]))
        a = RandomForestClassifier(n_trees=10, seed=7).fit(x, y).predict(q)
        b = RandomForestClassifier(n_trees=10, seed=7).fit(x, y).predict(q)
        assert np.array_equal(a, b)

    def test_no_trees_rejected(self):
        x, y = blobs(seed=0)
        with pytest.raises(ValueError, match="n_trees"):
            RandomForestClassifier(n_trees=0).fit(x, y)


class TestBoostedTrees:
    def test_constant_column_changes_nothing(self):
        # no row or feature sampling, and a constant column offers no
        # split, so training with it appended is byte-identical
        x, y = blobs(seed=17)
        q = np.random.default_rng(4).normal(0.0, 4.0, (25, x.shape[1]))
        plain = BoostedTreesClassifier(n_estimators=20).fit(x, y)
        padded = BoostedTreesClassifier(n_estimators=20).fit(
            np.hstack([x, np.full((x.shape[0], 1), 2.0)]), y
        )
        a = plain.decision_function(q)
        b = padded.decision_function(np.hstack([q, np.full((25, 1), 2.0)]))
        assert a.tobytes() == b.tobytes()

    def test_sign_of_score_decides_label(self):
        x, y = blobs(seed=18)
        model = BoostedTreesClassifier(n_estimators=15).fit(x, y)
        scores = model.decision_function(x)
        assert np.array_equal(model.predict(x), (scores > 0.0).astype(np.int64))

    def test_no_estimators_rejected(self):
        x, y = blobs(seed=0)
        with pytest.raises(ValueError, match="n_estimators"):
            BoostedTreesClassifier(n_estimators=0).fit(x, y)


class TestTrainClassifier:
    def test_explicit_params_skip_the_search(self):
        x, y = blobs(seed=40)
        model = train_classifier("KNN", x, y, params={"k": 3}, search_trials=0)
        assert model.k == 3

    def test_empty_space_needs_no_budget(self):
        x, y = blobs(seed=41)
        model = train_classifier("NB", x, y, search_trials=0)
        assert accuracy(y, model.predict(x)) == 1.0

    def test_search_is_deterministic(self):
        x, y = blobs(n_per=15, seed=42)
        a = train_classifier("KNN", x, y, seed=9, search_trials=4)
        b = train_classifier("KNN", x, y, seed=9, search_trials=4)
        assert a.k == b.k
        assert a.k in (1, 3, 5, 7, 11, 21)
        assert np.array_equal(a.predict(x), b.predict(x))

    def test_zero_budget_without_params_rejected(self):
        x, y = blobs(seed=0)
        with pytest.raises(ValueError, match="budget"):
            train_classifier("LR", x, y, search_trials=0)

    def test_unknown_family_rejected(self):
        x, y = blobs(seed=0)
        with pytest.raises(ValueError, match="unknown"):
            train_classifier("XGB", x, y)
