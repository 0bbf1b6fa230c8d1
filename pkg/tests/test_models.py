import numpy as np
import pytest

from reprolens.dataset import Dataset, smote, synth_corpus
from reprolens.errors import (
    FeatureWidthError,
    InvalidHyperparameters,
    MetricsError,
    SingleClassError,
)
from reprolens.models import (
    FAMILIES,
    GBT,
    KNN,
    MLP,
    NAIVE_BAYES,
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    compute_metrics,
    predict,
    predict_proba,
    train,
)
from reprolens.models.forest import RandomForestModel
from reprolens.models.trees import Tree, grow_tree

SMALL = {
    RANDOM_FOREST: {"n_trees": 15},
    GBT: {"n_rounds": 15},
    MLP: {"epochs": 30},
    NAIVE_BAYES: {},
    KNN: {},
}


@pytest.fixture(scope="module")
def corpus():
    return synth_corpus(120, 40, seed=0)


@pytest.fixture(scope="module")
def balanced(corpus):
    return smote(corpus, seed=1)


class TestTrainContract:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_probabilities_and_threshold(self, family, balanced, corpus):
        m = train(ModelSpec(family, SMALL[family], seed=2), balanced)
        probs = predict_proba(m, corpus.X)
        assert np.all((0 <= probs) & (probs <= 1))
        labels = predict(m, corpus.X)
        assert np.array_equal(labels, (probs >= 0.5).astype(int))

    @pytest.mark.parametrize("family", FAMILIES)
    def test_deterministic_given_seed(self, family, balanced, corpus):
        a = train(ModelSpec(family, SMALL[family], seed=3), balanced)
        b = train(ModelSpec(family, SMALL[family], seed=3), balanced)
        assert np.array_equal(predict_proba(a, corpus.X), predict_proba(b, corpus.X))

    def test_single_class_rejected(self):
        X = np.ones((8, 9))
        X[:, 6:] = 0
        with pytest.raises(SingleClassError):
            train(ModelSpec(KNN), Dataset(X, np.ones(8, dtype=int)))

    def test_width_mismatch_rejected(self, balanced):
        m = train(ModelSpec(KNN), balanced)
        with pytest.raises(FeatureWidthError):
            predict_proba(m, np.ones(4))
        with pytest.raises(FeatureWidthError):
            predict_proba(m, np.ones((3, 11)))

    def test_invalid_hyperparameters(self):
        with pytest.raises(InvalidHyperparameters):
            ModelSpec(KNN, {"k": 4}).resolved_hyperparameters()  # even k
        with pytest.raises(InvalidHyperparameters):
            ModelSpec(RANDOM_FOREST, {"n_trees": 0}).resolved_hyperparameters()
        with pytest.raises(InvalidHyperparameters):
            ModelSpec(GBT, {"learning_rate": 0}).resolved_hyperparameters()
        with pytest.raises(InvalidHyperparameters):
            ModelSpec(MLP, {"widht": 3}).resolved_hyperparameters()  # typo rejected
        with pytest.raises(InvalidHyperparameters):
            ModelSpec("decision_stump").resolved_hyperparameters()

    def test_perfectly_separable_single_feature(self):
        X = np.zeros((40, 9))
        X[:, 0] = np.concatenate([np.full(20, 5.0), np.full(20, 50.0)])
        y = np.array([1] * 20 + [0] * 20)
        ds = Dataset(X, y)
        m = train(ModelSpec(RANDOM_FOREST, {"n_trees": 11}, seed=0), ds)
        assert np.array_equal(predict(m, X), y)


class TestRandomForest:
    def test_vote_fraction(self):
        # four stub trees, three voting positive: probability 0.75
        leaf = lambda value: Tree([-1], [0.0], [-1], [-1], [value])
        forest = RandomForestModel([leaf(1.0), leaf(1.0), leaf(1.0), leaf(0.0)], {})
        m = TrainedModel(ModelSpec(RANDOM_FOREST), forest, 9, "stub")
        assert predict_proba(m, np.zeros(9)) == 0.75

    def test_single_tree_full_features_matches_cart(self, balanced, corpus):
        spec = ModelSpec(
            RANDOM_FOREST,
            {"n_trees": 1, "max_features": 9, "bootstrap": False},
            seed=11,
        )
        forest = train(spec, balanced)
        seq = np.random.SeedSequence(11).spawn(1)[0]
        cart = grow_tree(
            balanced.X, balanced.y.astype(float), "gini",
            np.random.default_rng(seq), max_features=9,
        )
        forest_votes = predict_proba(forest, corpus.X)
        cart_votes = (cart.predict(corpus.X) > 0.5).astype(float)
        assert np.array_equal(forest_votes, cart_votes)


class TestGbt:
    def test_training_loss_non_increasing(self, balanced):
        m = train(ModelSpec(GBT, {"n_rounds": 40}, seed=5), balanced)
        losses = m.model.train_losses
        assert len(losses) == 41
        assert all(a >= b - 1e-12 for a, b in zip(losses, losses[1:]))


class TestMlp:
    def test_gradient_check(self, balanced):
        m = train(ModelSpec(MLP, {"epochs": 5}, seed=7), balanced)
        mlp = m.model
        rng = np.random.default_rng(8)
        X = balanced.X[rng.choice(len(balanced), 10, replace=False)]
        y = (rng.random(10) < 0.5).astype(float)
        _, grad = mlp.loss_and_grad(X, y)
        flat = mlp.get_params()
        eps = 1e-6
        for idx in rng.choice(flat.size, 20, replace=False):
            up = flat.copy()
            up[idx] += eps
            mlp.set_params(up)
            lu, _ = mlp.loss_and_grad(X, y)
            down = flat.copy()
            down[idx] -= eps
            mlp.set_params(down)
            ld, _ = mlp.loss_and_grad(X, y)
            mlp.set_params(flat)
            fd = (lu - ld) / (2 * eps)
            rel = abs(fd - grad[idx]) / max(abs(fd), abs(grad[idx]), 1e-10)
            assert rel < 1e-4


class TestNaiveBayes:
    def test_symmetric_data_gives_half(self):
        # identical likelihoods in both classes, equal priors
        row = np.array([10, 1, 0, 1, 1, 0, 0, 0, 0], dtype=float)
        X = np.tile(row, (20, 1))
        y = np.array([1, 0] * 10)
        m = train(ModelSpec(NAIVE_BAYES), Dataset(X, y))
        assert predict_proba(m, row) == pytest.approx(0.5, abs=1e-12)

    def test_posterior_normalization(self, balanced, corpus):
        m = train(ModelSpec(NAIVE_BAYES), balanced)
        jll = m.model._joint_log_likelihood(corpus.X)
        mx = jll.max(axis=1, keepdims=True)
        norm = np.exp(jll - mx)
        p1 = norm[:, 1] / norm.sum(axis=1)
        p0 = norm[:, 0] / norm.sum(axis=1)
        assert np.all(np.abs(p1 + p0 - 1) < 1e-12)

    def test_training_order_invariance(self, corpus):
        rng = np.random.default_rng(9)
        perm = rng.permutation(len(corpus))
        shuffled = corpus.subset(perm)
        a = train(ModelSpec(NAIVE_BAYES), corpus)
        b = train(ModelSpec(NAIVE_BAYES), shuffled)
        probe = corpus.X[:25]
        assert np.allclose(predict_proba(a, probe), predict_proba(b, probe), atol=1e-12)


class TestKnn:
    def test_memorizes_training_point(self, corpus):
        m = train(ModelSpec(KNN, {"k": 1}), corpus)
        for i in (0, 5, len(corpus) - 1):
            assert predict_proba(m, corpus.X[i]) == float(corpus.y[i])

    def test_training_order_invariance(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(60, 9))  # continuous: exact ties have measure zero
        y = (rng.random(60) < 0.5).astype(int)
        y[:2] = [0, 1]
        ds = Dataset(X, y)
        shuffled = ds.subset(rng.permutation(60))
        a = train(ModelSpec(KNN), ds)
        b = train(ModelSpec(KNN), shuffled)
        probe = rng.normal(size=(20, 9))
        assert np.allclose(predict_proba(a, probe), predict_proba(b, probe), atol=1e-12)


class TestComputeMetrics:
    def test_perfect_confusion(self):
        r = compute_metrics([[10, 0], [0, 10]])
        assert r.accuracy == 1.0
        for m in r.per_class.values():
            assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)

    def test_hand_arithmetic(self):
        r = compute_metrics([[8, 2], [4, 6]])
        repro = r.per_class["Reproducible"]
        assert repro.precision == pytest.approx(8 / 12)
        assert repro.recall == pytest.approx(0.8)
        assert r.accuracy == pytest.approx(0.7)
        irre = r.per_class["Irreproducible"]
        assert irre.precision == pytest.approx(6 / 8)
        assert irre.recall == pytest.approx(0.6)

    def test_zero_denominator_convention(self):
        r = compute_metrics([[0, 5], [0, 5]])
        repro = r.per_class["Reproducible"]
        assert repro.precision == 0.0 and repro.recall == 0.0 and repro.f1 == 0.0

    def test_f1_is_harmonic_mean(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            counts = rng.integers(0, 30, (2, 2))
            if counts.sum() == 0:
                continue
            r = compute_metrics(counts)
            for m in r.per_class.values():
                if m.precision + m.recall > 0:
                    expected = 2 * m.precision * m.recall / (m.precision + m.recall)
                    assert abs(m.f1 - expected) < 1e-12
            assert r.accuracy == pytest.approx(np.trace(counts) / counts.sum())

    def test_all_zero_rejected(self):
        with pytest.raises(MetricsError):
            compute_metrics([[0, 0], [0, 0]])
