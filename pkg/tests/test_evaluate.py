import json

import numpy as np
import pytest

from reprolens.dataset import (
    IRREPRODUCIBLE,
    REPRODUCIBLE,
    Dataset,
    smote,
    synth_corpus,
)
from reprolens.errors import DatasetError
from reprolens.models import (
    GLOBAL,
    IN_FOLD,
    KNN,
    ModelSpec,
    evaluate_cv,
    metrics_to_csv,
    model_from_dict,
    model_to_dict,
    register_family,
    train,
    predict_proba,
)


class _OracleModel:
    """Label-leaking double: looks the answer up in the full dataset."""

    def __init__(self, full: Dataset) -> None:
        self.full = full

    def predict_proba(self, X):
        out = np.empty(X.shape[0])
        for i, row in enumerate(X):
            matches = np.flatnonzero((self.full.X == row).all(axis=1))
            out[i] = float(self.full.y[matches[0]])
        return out


class _ConstantModel:
    def __init__(self, value: float) -> None:
        self.value = value

    def predict_proba(self, X):
        return np.full(X.shape[0], self.value)


class _RecordingModel(_ConstantModel):
    seen_training: list = []

    def __init__(self, train_ds: Dataset) -> None:
        super().__init__(1.0)
        _RecordingModel.seen_training.append(train_ds)


def setup_module():
    register_family("oracle_double", lambda X, y, h, s: _OracleModel(h["full"]))
    register_family("majority_dummy", lambda X, y, h, s: _ConstantModel(1.0))


class TestEvaluateCv:
    def test_oracle_scores_perfectly(self):
        ds = synth_corpus(60, 30, seed=0)
        spec = ModelSpec("oracle_double", {"full": ds}, seed=0)
        report = evaluate_cv(spec, ds, k=5, seed=0)
        assert report.accuracy == 1.0
        for m in report.per_class.values():
            assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)

    def test_majority_dummy_matches_class_prior(self):
        ds = synth_corpus(270, 87, seed=1)
        report = evaluate_cv(ModelSpec("majority_dummy"), ds, k=10, seed=1)
        assert report.accuracy == pytest.approx(270 / 357)
        assert report.per_class["Irreproducible"].recall == 0.0
        assert report.confusion == ((270, 0), (87, 0))

    def test_rejects_synthetic_input(self):
        ds = smote(synth_corpus(30, 12, seed=2), seed=3)
        with pytest.raises(DatasetError):
            evaluate_cv(ModelSpec(KNN), ds, k=3, seed=0)

    def test_deterministic_reports(self):
        ds = synth_corpus(60, 25, seed=4)
        spec = ModelSpec(KNN, seed=5)
        a = evaluate_cv(spec, ds, k=5, seed=6)
        b = evaluate_cv(spec, ds, k=5, seed=6)
        assert a == b
        assert metrics_to_csv({"knn": a}) == metrics_to_csv({"knn": b})

    def test_every_real_example_scored_once(self):
        ds = synth_corpus(50, 20, seed=7)
        spec = ModelSpec(KNN, seed=0)
        report, details = evaluate_cv(spec, ds, k=5, seed=8, return_details=True)
        assert not np.isnan(details.proba).any()
        assert sorted(np.unique(details.fold_of)) == list(range(5))
        assert int(np.asarray(report.confusion).sum()) == len(ds)

    def test_in_fold_training_is_balanced_and_synthetics_never_scored(self):
        _RecordingModel.seen_training = []
        register_family("recording_dummy", lambda X, y, h, s: _RecordingModel(h["ds"]))

        ds = synth_corpus(40, 15, seed=9)

        def fitter(X, y, hyper, seed):
            train_ds = Dataset(X, y)
            counts = train_ds.class_counts()
            assert counts[REPRODUCIBLE] == counts[IRREPRODUCIBLE]
            return _ConstantModel(1.0)

        register_family("balance_probe", fitter)
        report = evaluate_cv(ModelSpec("balance_probe"), ds, k=5, seed=10)
        # only the 55 real rows are ever scored
        assert int(np.asarray(report.confusion).sum()) == len(ds)

    def test_global_mode_uses_one_synthetic_pool(self):
        ds = synth_corpus(40, 15, seed=11)
        sizes = []

        def fitter(X, y, hyper, seed):
            sizes.append(len(y))
            return _ConstantModel(1.0)

        register_family("size_probe", fitter)
        evaluate_cv(ModelSpec("size_probe"), ds, k=5, seed=12, smote_mode=GLOBAL)
        # each fold trains on 4/5 of the real rows plus the full 25-synthetic pool
        assert sizes == [44 + 25] * 5

    def test_in_fold_is_the_default(self):
        ds = synth_corpus(40, 15, seed=13)
        a = evaluate_cv(ModelSpec(KNN, seed=1), ds, k=5, seed=14)
        b = evaluate_cv(ModelSpec(KNN, seed=1), ds, k=5, seed=14, smote_mode=IN_FOLD)
        assert a == b


class TestSerializedModelParity:
    def test_cv_trained_model_roundtrip(self):
        ds = synth_corpus(50, 20, seed=15)
        bal = smote(ds, seed=16)
        m = train(ModelSpec(KNN, seed=0), bal)
        clone = model_from_dict(json.loads(json.dumps(model_to_dict(m))))
        assert np.array_equal(predict_proba(m, ds.X), predict_proba(clone, ds.X))
        assert clone.training_fingerprint == m.training_fingerprint


class TestFoldParallelism:
    def test_jobs_parameter_is_deterministic(self):
        from reprolens.models import RANDOM_FOREST

        ds = synth_corpus(60, 25, seed=20)
        spec = ModelSpec(RANDOM_FOREST, {"n_trees": 6}, seed=21)
        sequential = evaluate_cv(spec, ds, k=5, seed=22)
        parallel = evaluate_cv(spec, ds, k=5, seed=22, jobs=4)
        assert sequential == parallel
