"""k-nearest-neighbors over standardized features.

Distance ties resolve to the lower training index (stable sort); k is
validated odd, so binary vote ties cannot occur.
"""

from __future__ import annotations

import numpy as np


class KnnModel:
    def __init__(
        self, Z: np.ndarray, y: np.ndarray, mean: np.ndarray, std: np.ndarray, hyper: dict
    ) -> None:
        self.Z = Z  # standardized training matrix
        self.y = y
        self.mean = mean
        self.std = std
        self.hyper = hyper

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, hyper: dict, seed: int) -> "KnnModel":
        del seed  # memorization; nothing stochastic
        X = np.asarray(X, dtype=np.float64)
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std = np.where(std < 1e-12, 1.0, std)
        return cls((X - mean) / std, np.asarray(y, dtype=np.int64), mean, std, dict(hyper))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Q = (np.atleast_2d(np.asarray(X, dtype=np.float64)) - self.mean) / self.std
        k = min(self.hyper["k"], len(self.y))
        out = np.empty(Q.shape[0], dtype=np.float64)
        for i in range(Q.shape[0]):
            d = np.sqrt(np.sum((self.Z - Q[i]) ** 2, axis=1))
            nearest = np.argsort(d, kind="stable")[:k]
            out[i] = self.y[nearest].mean()
        return out

    def to_dict(self) -> dict:
        return {
            "Z": self.Z.tolist(),
            "y": self.y.tolist(),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict, hyper: dict) -> "KnnModel":
        return cls(
            np.array(d["Z"]), np.array(d["y"], dtype=np.int64), np.array(d["mean"]),
            np.array(d["std"]), hyper,
        )
