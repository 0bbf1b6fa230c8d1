"""Versioned JSON serialization of trained models."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import BundleError
from .base import GBT, KNN, MLP, NAIVE_BAYES, RANDOM_FOREST, ModelSpec, TrainedModel
from .boosting import GradientBoostedTreesModel
from .forest import RandomForestModel
from .knn import KnnModel
from .mlp import MlpModel
from .naive_bayes import NaiveBayesModel

FORMAT_VERSION = "1"

_LOADERS = {
    RANDOM_FOREST: RandomForestModel.from_dict,
    GBT: GradientBoostedTreesModel.from_dict,
    MLP: MlpModel.from_dict,
    NAIVE_BAYES: NaiveBayesModel.from_dict,
    KNN: KnnModel.from_dict,
}


def model_to_dict(m: TrainedModel) -> dict:
    if not hasattr(m.model, "to_dict"):
        raise BundleError(f"family {m.spec.family!r} is not serializable")
    return {
        "version": FORMAT_VERSION,
        "family": m.spec.family,
        "hyperparameters": m.spec.resolved_hyperparameters(),
        "seed": m.spec.seed,
        "feature_count": m.feature_count,
        "training_fingerprint": m.training_fingerprint,
        "params": m.model.to_dict(),
    }


def model_from_dict(d: dict) -> TrainedModel:
    try:
        if d["version"] != FORMAT_VERSION:
            raise BundleError(f"unsupported model format version {d['version']!r}")
        family = d["family"]
        if family not in _LOADERS:
            raise BundleError(f"unknown family {family!r}")
        hyper = d["hyperparameters"]
        model = _LOADERS[family](d["params"], hyper)
        spec = ModelSpec(family, hyper, d["seed"])
        return TrainedModel(spec, model, d["feature_count"], d["training_fingerprint"])
    except (KeyError, TypeError) as exc:
        raise BundleError(f"malformed model document: {exc!r}") from None


def save_model(m: TrainedModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(m), sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    try:
        return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise BundleError(f"not a model file: {exc}") from None
