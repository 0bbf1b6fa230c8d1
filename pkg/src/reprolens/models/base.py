"""One train/predict contract over the five classifier families.

Families are registered in a table so tests can plug in doubles (an oracle,
a majority dummy) without touching the real implementations. All models take
an (n, 9) float matrix and return P(reproducible) per row; the classification
threshold is 0.5 everywhere.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..analyzer.features import N_FEATURES
from ..dataset import Dataset
from ..errors import FeatureWidthError, InvalidHyperparameters, SingleClassError
from .boosting import GradientBoostedTreesModel
from .forest import RandomForestModel
from .knn import KnnModel
from .mlp import MlpModel
from .naive_bayes import NaiveBayesModel

RANDOM_FOREST = "random_forest"
GBT = "gbt"
MLP = "mlp"
NAIVE_BAYES = "naive_bayes"
KNN = "knn"

FAMILIES = (RANDOM_FOREST, GBT, MLP, NAIVE_BAYES, KNN)

_DEFAULTS: dict[str, dict] = {
    RANDOM_FOREST: {
        "n_trees": 100,
        "max_features": 3,
        "bootstrap": True,
        "min_samples_split": 2,
        "max_depth": None,
    },
    GBT: {"n_rounds": 100, "max_depth": 3, "learning_rate": 0.1, "min_samples_split": 2},
    MLP: {"hidden": 16, "epochs": 200, "learning_rate": 0.01, "batch_size": 32},
    NAIVE_BAYES: {"laplace": 1.0, "var_floor": 1e-9},
    KNN: {"k": 5},
}

_FITTERS = {
    RANDOM_FOREST: RandomForestModel.fit,
    GBT: GradientBoostedTreesModel.fit,
    MLP: MlpModel.fit,
    NAIVE_BAYES: NaiveBayesModel.fit,
    KNN: KnnModel.fit,
}


def register_family(name: str, fitter, defaults: dict | None = None) -> None:
    """Register an extra family (used by tests for oracle/dummy doubles)."""
    _FITTERS[name] = fitter
    _DEFAULTS[name] = defaults or {}


def _validate(family: str, hyper: dict) -> None:
    def require(cond: bool, message: str) -> None:
        if not cond:
            raise InvalidHyperparameters(f"{family}: {message}")

    if family == RANDOM_FOREST:
        require(hyper["n_trees"] >= 1, "n_trees must be >= 1")
        require(1 <= hyper["max_features"] <= N_FEATURES, "max_features out of range")
        require(hyper["min_samples_split"] >= 2, "min_samples_split must be >= 2")
        require(hyper["max_depth"] is None or hyper["max_depth"] >= 1, "bad max_depth")
    elif family == GBT:
        require(hyper["n_rounds"] >= 1, "n_rounds must be >= 1")
        require(hyper["max_depth"] >= 1, "max_depth must be >= 1")
        require(hyper["learning_rate"] > 0, "learning rate must be positive")
    elif family == MLP:
        require(hyper["hidden"] >= 1, "hidden must be >= 1")
        require(hyper["epochs"] >= 1, "epochs must be >= 1")
        require(hyper["learning_rate"] > 0, "learning rate must be positive")
        require(hyper["batch_size"] >= 1, "batch_size must be >= 1")
    elif family == NAIVE_BAYES:
        require(hyper["laplace"] > 0, "laplace must be positive")
        require(hyper["var_floor"] > 0, "var_floor must be positive")
    elif family == KNN:
        require(hyper["k"] >= 1, "k must be >= 1")
        require(hyper["k"] % 2 == 1, "k must be odd (vote ties are undefined)")


@dataclass(frozen=True)
class ModelSpec:
    family: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def resolved_hyperparameters(self) -> dict:
        if self.family not in _FITTERS:
            raise InvalidHyperparameters(f"unknown family {self.family!r}")
        merged = dict(_DEFAULTS.get(self.family, {}))
        unknown = set(self.hyperparameters) - set(merged) if merged else set()
        if unknown and self.family in FAMILIES:
            raise InvalidHyperparameters(f"{self.family}: unknown hyperparameters {sorted(unknown)}")
        merged.update(self.hyperparameters)
        if self.family in FAMILIES:
            _validate(self.family, merged)
        return merged


@dataclass
class TrainedModel:
    spec: ModelSpec
    model: object
    feature_count: int
    training_fingerprint: str


def _fingerprint(X: np.ndarray, y: np.ndarray) -> str:
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(X).tobytes())
    digest.update(np.ascontiguousarray(y).tobytes())
    return digest.hexdigest()


def train(spec: ModelSpec, ds: Dataset) -> TrainedModel:
    """Fit one model; deterministic given (spec.seed, ds)."""
    hyper = spec.resolved_hyperparameters()
    counts = ds.class_counts()
    if min(counts.values()) == 0:
        raise SingleClassError("training needs both classes present")
    model = _FITTERS[spec.family](ds.X, ds.y, hyper, spec.seed)
    return TrainedModel(spec, model, N_FEATURES, _fingerprint(ds.X, ds.y))


def predict_proba(m: TrainedModel, x: np.ndarray) -> float | np.ndarray:
    """P(reproducible); accepts one vector of width 9 or an (n, 9) batch."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != m.feature_count:
        raise FeatureWidthError(f"expected width {m.feature_count}, got {arr.shape}")
    probs = np.asarray(m.model.predict_proba(arr), dtype=np.float64)
    return float(probs[0]) if single else probs


def predict(m: TrainedModel, x: np.ndarray) -> int | np.ndarray:
    """Predicted label: reproducible iff predict_proba >= 0.5."""
    probs = predict_proba(m, x)
    if isinstance(probs, float):
        return int(probs >= 0.5)
    return (probs >= 0.5).astype(np.int64)
