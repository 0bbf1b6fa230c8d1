"""Five classifier families behind one train/predict contract."""

from .base import (
    FAMILIES,
    GBT,
    KNN,
    MLP,
    NAIVE_BAYES,
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    predict,
    predict_proba,
    register_family,
    train,
)
from .evaluate import GLOBAL, IN_FOLD, CvDetails, evaluate_cv
from .metrics import (
    CLASS_NAMES,
    ClassMetrics,
    MetricsReport,
    compute_metrics,
    metrics_to_csv,
    render_metrics_table,
)
from .serialize import load_model, model_from_dict, model_to_dict, save_model

__all__ = [
    "CLASS_NAMES",
    "CvDetails",
    "ClassMetrics",
    "FAMILIES",
    "GBT",
    "GLOBAL",
    "IN_FOLD",
    "KNN",
    "MLP",
    "MetricsReport",
    "ModelSpec",
    "NAIVE_BAYES",
    "RANDOM_FOREST",
    "TrainedModel",
    "compute_metrics",
    "evaluate_cv",
    "load_model",
    "metrics_to_csv",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "predict_proba",
    "register_family",
    "render_metrics_table",
    "save_model",
    "train",
]
