"""Gradient-boosted regression trees on logistic loss.

A stand-in for the usual extreme-boosting package without its regularization
extras: depth-limited MSE trees fit to the residual y - p, leaf values set by
a Newton step, contributions shrunk by the learning rate. A per-round
backoff halves a tree's contribution if it ever fails to reduce training
loss, so the recorded loss curve is non-increasing by construction.
"""

from __future__ import annotations

import numpy as np

from .trees import Tree, grow_tree

_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def _log_loss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, _EPS, 1 - _EPS)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


class GradientBoostedTreesModel:
    def __init__(self, f0: float, trees: list[Tree], hyper: dict, train_losses: list[float]) -> None:
        self.f0 = f0
        self.trees = trees  # leaf values already include learning rate and backoff scale
        self.hyper = hyper
        self.train_losses = train_losses

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, hyper: dict, seed: int) -> "GradientBoostedTreesModel":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        rng = np.random.default_rng(seed)
        pos = float(np.clip(y.mean(), _EPS, 1 - _EPS))
        f0 = float(np.log(pos / (1 - pos)))
        F = np.full(X.shape[0], f0)
        lr = hyper["learning_rate"]
        trees: list[Tree] = []
        losses = [_log_loss(y, _sigmoid(F))]
        for _ in range(hyper["n_rounds"]):
            p = _sigmoid(F)
            residual = y - p
            tree = grow_tree(
                X,
                residual,
                "mse",
                rng,
                max_features=X.shape[1],
                max_depth=hyper["max_depth"],
                min_samples_split=hyper["min_samples_split"],
            )
            leaves = tree.leaf_of(X)
            hessian = p * (1 - p)
            newton = np.zeros_like(tree.value)
            for leaf in np.unique(leaves):
                members = leaves == leaf
                newton[leaf] = residual[members].sum() / max(hessian[members].sum(), _EPS)
            scale = lr
            # backoff keeps the training loss non-increasing round over round
            for _ in range(20):
                candidate = F + scale * newton[leaves]
                if _log_loss(y, _sigmoid(candidate)) <= losses[-1]:
                    break
                scale /= 2.0
            else:
                scale = 0.0
                candidate = F
            tree.value = scale * newton
            F = candidate
            trees.append(tree)
            losses.append(_log_loss(y, _sigmoid(F)))
        return cls(f0, trees, dict(hyper), losses)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        F = np.full(X.shape[0], self.f0)
        for tree in self.trees:
            F += tree.predict(X)
        return _sigmoid(F)

    def to_dict(self) -> dict:
        return {"f0": self.f0, "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict, hyper: dict) -> "GradientBoostedTreesModel":
        return cls(d["f0"], [Tree.from_dict(t) for t in d["trees"]], hyper, [])
