"""Random forest: bagged Gini trees voting on the positive class."""

from __future__ import annotations

import numpy as np

from .trees import Tree, grow_tree


class RandomForestModel:
    """Bagged CART ensemble; predict_proba is the fraction of tree votes.

    A tree votes positive when its leaf's class-1 share exceeds 0.5; exact
    leaf ties vote negative (the conservative side).
    """

    def __init__(self, trees: list[Tree], hyper: dict) -> None:
        self.trees = trees
        self.hyper = hyper

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, hyper: dict, seed: int) -> "RandomForestModel":
        n = X.shape[0]
        seqs = np.random.SeedSequence(seed).spawn(hyper["n_trees"])
        trees = []
        for sq in seqs:
            rng = np.random.default_rng(sq)
            idx = rng.integers(0, n, n) if hyper["bootstrap"] else np.arange(n)
            trees.append(
                grow_tree(
                    X[idx],
                    y[idx],
                    "gini",
                    rng,
                    max_features=hyper["max_features"],
                    max_depth=hyper["max_depth"],
                    min_samples_split=hyper["min_samples_split"],
                )
            )
        return cls(trees, dict(hyper))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            votes += tree.predict(X) > 0.5
        return votes / len(self.trees)

    def to_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict, hyper: dict) -> "RandomForestModel":
        return cls([Tree.from_dict(t) for t in d["trees"]], hyper)
