import numpy as np
import pytest

from reprolens.dataset import smote, synth_corpus
from reprolens.errors import ExplainError
from reprolens.explain import (
    ShapleyExplanation,
    background_sample,
    beeswarm_csv,
    exact_shapley,
    export_plot_data,
    global_importance,
    waterfall_svg,
)
from reprolens.models import (
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    predict_proba,
    train,
)


def as_model(fn) -> TrainedModel:
    class _Wrapper:
        def predict_proba(self, X):
            return fn(np.atleast_2d(X))

    return TrainedModel(ModelSpec("stub"), _Wrapper(), 9, "stub")


class CountingWrapper:
    def __init__(self, inner) -> None:
        self.inner = inner
        self.rows = 0

    def predict_proba(self, X):
        self.rows += X.shape[0]
        return self.inner.predict_proba(X)


@pytest.fixture(scope="module")
def trained():
    ds = synth_corpus(60, 25, seed=0)
    bal = smote(ds, seed=1)
    model = train(ModelSpec(RANDOM_FOREST, {"n_trees": 12}, seed=2), bal)
    return model, ds


class TestAxioms:
    def test_constant_model(self):
        m = as_model(lambda X: np.full(X.shape[0], 0.42))
        e = exact_shapley(m, np.arange(9.0), np.ones((5, 9)))
        assert np.all(e.phi == 0.0)
        assert e.base_value == e.prediction == pytest.approx(0.42)

    def test_additive_model_zero_background(self):
        m = as_model(lambda X: 0.1 * X[:, 0] + 0.2 * X[:, 1])
        x = np.array([3.0, 2.0, 9, 9, 9, 9, 9, 9, 9])
        e = exact_shapley(m, x, np.zeros((1, 9)))
        assert e.phi[0] == pytest.approx(0.3, abs=1e-12)
        assert e.phi[1] == pytest.approx(0.4, abs=1e-12)
        assert np.all(np.abs(e.phi[2:]) < 1e-12)
        assert e.base_value == pytest.approx(0.0, abs=1e-12)

    def test_efficiency_on_trained_model(self, trained):
        model, ds = trained
        bg = background_sample(ds.X, 16, seed=3)
        for i in range(10):
            e = exact_shapley(model, ds.X[i], bg)
            assert abs(e.phi.sum() - (e.prediction - e.base_value)) < 1e-9
            assert e.prediction == pytest.approx(float(predict_proba(model, ds.X[i])))

    def test_dummy_feature_exactly_zero(self, trained):
        model, ds = trained
        # constant column across instance and background: feature 8 fixed
        X = ds.X.copy()
        X[:, 8] = 0.0
        bg = X[:12]
        e = exact_shapley(model, X[20], bg)
        assert e.phi[8] == 0.0

    def test_symmetry_on_duplicated_columns(self):
        # model symmetric in features 3 and 4; the column is duplicated in
        # both the instance and the background (the interventional value
        # function needs matching exchangeability on the data side too)
        m = as_model(lambda X: 1 / (1 + np.exp(-(X[:, 3] + X[:, 4] + 0.5 * X[:, 0]))))
        rng = np.random.default_rng(4)
        bg = rng.normal(size=(8, 9))
        bg[:, 4] = bg[:, 3]
        for _ in range(20):
            x = rng.normal(size=9)
            x[4] = x[3]
            e = exact_shapley(m, x, bg)
            assert abs(e.phi[3] - e.phi[4]) < 1e-9

    def test_exactly_512_evaluations_per_background_row(self, trained):
        model, ds = trained
        for b in (1, 4, 9):
            counter = CountingWrapper(model.model)
            counted = TrainedModel(model.spec, counter, 9, "c")
            exact_shapley(counted, ds.X[0], ds.X[:b])
            assert counter.rows == 512 * b

    def test_empty_background_rejected(self, trained):
        model, ds = trained
        with pytest.raises(ExplainError):
            exact_shapley(model, ds.X[0], np.empty((0, 9)))


class TestGlobalImportance:
    def make(self, phi):
        phi = np.asarray(phi, dtype=float)
        return ShapleyExplanation(phi, 0.0, float(phi.sum()), np.zeros(9))

    def test_single_explanation_ranking(self):
        e = self.make([0.3, -0.1, 0, 0, 0, 0, 0, 0, 0])
        gi = global_importance([e])
        assert gi.ranking[0] == "loc"
        assert gi.ranking[1] == "has_method"

    def test_opposite_signs_average_magnitudes(self):
        a = self.make([0.4, 0, 0, 0, 0, 0, 0, 0, 0])
        b = self.make([-0.2, 0, 0, 0, 0, 0, 0, 0, 0])
        gi = global_importance([a, b])
        assert gi.mean_abs_phi["loc"] == pytest.approx(0.3)

    def test_signal_features_outrank_exception_handling(self):
        ds = synth_corpus(270, 87, seed=5)
        bal = smote(ds, seed=6)
        model = train(ModelSpec(RANDOM_FOREST, {"n_trees": 40}, seed=7), bal)
        bg = background_sample(ds.X, 24, seed=8)
        explanations = [exact_shapley(model, ds.X[i], bg) for i in range(0, 120, 3)]
        gi = global_importance(explanations)
        rank = {name: i for i, name in enumerate(gi.ranking)}
        assert rank["has_main"] < rank["exception_handling"]
        assert rank["compilable"] < rank["exception_handling"]

    def test_ranking_is_permutation(self):
        e = self.make(np.linspace(-1, 1, 9))
        gi = global_importance([e])
        assert sorted(gi.ranking) == sorted(
            ["loc", "has_method", "has_main", "has_class", "parsable",
             "compilable", "native_import", "external_import", "exception_handling"]
        )

    def test_empty_rejected(self):
        with pytest.raises(ExplainError):
            global_importance([])


class TestExports:
    def explain_one(self, trained):
        model, ds = trained
        return exact_shapley(model, ds.X[0], background_sample(ds.X, 8, seed=9))

    def test_waterfall_contract(self, trained):
        e = self.explain_one(trained)
        doc = export_plot_data("waterfall", e)
        assert len(doc["rows"]) == 9
        mags = [abs(r["phi"]) for r in doc["rows"]]
        assert mags == sorted(mags, reverse=True)
        assert doc["base_value"] == e.base_value
        assert doc["prediction"] == e.prediction

    def test_beeswarm_contract(self, trained):
        model, ds = trained
        bg = background_sample(ds.X, 8, seed=10)
        explanations = [exact_shapley(model, ds.X[i], bg) for i in range(7)]
        doc = export_plot_data("beeswarm", explanations)
        assert len(doc["rows"]) == 7 * 9
        assert {"instance", "feature", "feature_value", "phi"} <= set(doc["rows"][0])
        csv_text = beeswarm_csv(doc)
        assert len(csv_text.splitlines()) == 1 + 7 * 9

    def test_force_checksum(self, trained):
        e = self.explain_one(trained)
        doc = export_plot_data("force", e)
        assert doc["check_sum"] == pytest.approx(doc["prediction"], abs=1e-9)

    def test_kind_payload_mismatch(self, trained):
        e = self.explain_one(trained)
        with pytest.raises(ExplainError):
            export_plot_data("beeswarm", e)
        with pytest.raises(ExplainError):
            export_plot_data("waterfall", [e])
        with pytest.raises(ExplainError):
            export_plot_data("violin", e)

    def test_waterfall_svg_renders(self, trained):
        e = self.explain_one(trained)
        svg = waterfall_svg(export_plot_data("waterfall", e))
        assert svg.startswith("<svg") and svg.endswith("</svg>")
        assert svg.count("<rect") == 9
