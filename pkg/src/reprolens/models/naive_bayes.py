"""Hybrid naive Bayes: Gaussian for LOC, categorical for the rest.

The eight non-LOC features are categorical (booleans and tri-states), so
inputs are snapped to their nearest legal category at fit and predict time;
interpolated SMOTE coordinates therefore need no special handling here.
Categorical likelihoods use Laplace smoothing.
"""

from __future__ import annotations

import numpy as np

_BOOL_CATS = (0.0, 1.0)
_TRI_CATS = (-1.0, 0.0, 1.0)


def _snap(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64).copy()
    for c in range(1, 6):
        X[:, c] = np.where(X[:, c] >= 0.5, 1.0, 0.0)
    for c in range(6, 9):
        X[:, c] = np.clip(np.rint(X[:, c]), -1.0, 1.0)
    return X


class NaiveBayesModel:
    def __init__(
        self,
        log_prior: np.ndarray,
        loc_mean: np.ndarray,
        loc_var: np.ndarray,
        tables: list[dict[float, np.ndarray]],
        hyper: dict,
    ) -> None:
        self.log_prior = log_prior  # [class0, class1]
        self.loc_mean = loc_mean
        self.loc_var = loc_var
        self.tables = tables  # per non-LOC column: category -> log P(v|class)
        self.hyper = hyper

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, hyper: dict, seed: int) -> "NaiveBayesModel":
        del seed  # closed-form fit; nothing stochastic
        X = _snap(X)
        y = np.asarray(y, dtype=np.int64)
        alpha = hyper["laplace"]
        n = len(y)
        counts = np.array([np.sum(y == 0), np.sum(y == 1)], dtype=np.float64)
        log_prior = np.log(counts / n)

        loc_mean = np.empty(2)
        loc_var = np.empty(2)
        for k in (0, 1):
            locs = X[y == k, 0]
            loc_mean[k] = locs.mean()
            loc_var[k] = max(locs.var(), hyper["var_floor"])

        tables: list[dict[float, np.ndarray]] = []
        for c in range(1, 9):
            cats = _BOOL_CATS if c < 6 else _TRI_CATS
            table: dict[float, np.ndarray] = {}
            for v in cats:
                probs = np.empty(2)
                for k in (0, 1):
                    in_class = X[y == k, c]
                    probs[k] = (np.sum(in_class == v) + alpha) / (
                        counts[k] + alpha * len(cats)
                    )
                table[v] = np.log(probs)
            tables.append(table)
        return cls(log_prior, loc_mean, loc_var, tables, dict(hyper))

    def _joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        X = _snap(np.atleast_2d(X))
        n = X.shape[0]
        jll = np.tile(self.log_prior, (n, 1))
        loc = X[:, 0][:, None]
        jll += -0.5 * (
            np.log(2 * np.pi * self.loc_var) + (loc - self.loc_mean) ** 2 / self.loc_var
        )
        for c in range(1, 9):
            table = self.tables[c - 1]
            for v, logp in table.items():
                jll[X[:, c] == v] += logp
        return jll

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        m = jll.max(axis=1, keepdims=True)
        norm = np.exp(jll - m)
        return norm[:, 1] / norm.sum(axis=1)

    def to_dict(self) -> dict:
        return {
            "log_prior": self.log_prior.tolist(),
            "loc_mean": self.loc_mean.tolist(),
            "loc_var": self.loc_var.tolist(),
            "tables": [
                {repr(v): logp.tolist() for v, logp in table.items()} for table in self.tables
            ],
        }

    @classmethod
    def from_dict(cls, d: dict, hyper: dict) -> "NaiveBayesModel":
        tables = [
            {float(v): np.array(logp) for v, logp in table.items()} for table in d["tables"]
        ]
        return cls(
            np.array(d["log_prior"]),
            np.array(d["loc_mean"]),
            np.array(d["loc_var"]),
            tables,
            hyper,
        )
