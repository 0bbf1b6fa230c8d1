"""Cross-validated evaluation with SMOTE rebalancing.

Hygiene rules: the input dataset must contain real examples only; synthetic
rows are created per fold (in_fold mode, the default, leak-free) or once from
the full dataset (global mode, the order the write-up is usually read as) and
join the training side only. Test folds are always untouched real examples,
and metrics pool the confusion counts over the union of test predictions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import REPRODUCIBLE, Dataset, smote, stratified_kfold
from ..errors import DatasetError
from .base import ModelSpec, predict_proba, train
from .metrics import compute_metrics

IN_FOLD = "in_fold"
GLOBAL = "global"


@dataclass
class CvDetails:
    """Per-example outcome of the cross-validation, index-aligned to ds."""

    proba: np.ndarray
    predicted: np.ndarray
    fold_of: np.ndarray


def evaluate_cv(
    spec: ModelSpec,
    ds: Dataset,
    k: int = 10,
    seed: int = 0,
    smote_mode: str = IN_FOLD,
    smote_k: int = 5,
    return_details: bool = False,
    jobs: int = 1,
):
    if smote_mode not in (IN_FOLD, GLOBAL):
        raise DatasetError(f"unknown smote_mode {smote_mode!r}")
    if bool(ds.synthetic.any()):
        raise DatasetError("evaluate_cv expects real examples only")

    folds = stratified_kfold(ds, k=k, seed=seed)
    smote_seeds = np.random.SeedSequence(seed).generate_state(k + 1)

    synth_pool: Dataset | None = None
    if smote_mode == GLOBAL:
        balanced = smote(ds, k=smote_k, seed=int(smote_seeds[k]))
        if len(balanced) > len(ds):
            synth_pool = balanced.subset(np.arange(len(ds), len(balanced)))

    def run_fold(f: int) -> np.ndarray:
        train_idx, _ = folds[f]
        train_ds = ds.subset(train_idx)
        if smote_mode == IN_FOLD:
            counts = train_ds.class_counts()
            if min(counts.values()) != max(counts.values()):
                train_ds = smote(train_ds, k=smote_k, seed=int(smote_seeds[f]))
        elif synth_pool is not None:
            train_ds = train_ds.concat(synth_pool)
        model = train(spec, train_ds)
        return np.asarray(predict_proba(model, ds.X[folds[f][1]]))

    if jobs > 1:
        # folds are independent; results are reduced in fold order, so the
        # report is identical to the sequential one
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            fold_probas = list(pool.map(run_fold, range(k)))
    else:
        fold_probas = [run_fold(f) for f in range(k)]

    confusion = np.zeros((2, 2), dtype=np.int64)
    proba = np.full(len(ds), np.nan)
    fold_of = np.full(len(ds), -1, dtype=np.int64)
    for f, (_, test_idx) in enumerate(folds):
        p = fold_probas[f]
        proba[test_idx] = p
        fold_of[test_idx] = f
        pred = (p >= 0.5).astype(np.int64)
        for actual, predicted in zip(ds.y[test_idx], pred):
            row = 0 if actual == REPRODUCIBLE else 1
            col = 0 if predicted == REPRODUCIBLE else 1
            confusion[row, col] += 1

    report = compute_metrics(confusion)
    if return_details:
        return report, CvDetails(proba, (proba >= 0.5).astype(np.int64), fold_of)
    return report
