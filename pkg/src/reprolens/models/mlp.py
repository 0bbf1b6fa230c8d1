"""One-hidden-layer perceptron trained by mini-batch gradient descent.

Inputs are standardized with training statistics; the hidden layer is tanh,
the output logistic, the loss binary cross-entropy. Parameters are exposed
as one flat float64 vector so analytic gradients can be checked against
finite differences.
"""

from __future__ import annotations

import numpy as np

_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


class MlpModel:
    def __init__(
        self,
        W1: np.ndarray,
        b1: np.ndarray,
        w2: np.ndarray,
        b2: float,
        mean: np.ndarray,
        std: np.ndarray,
        hyper: dict,
    ) -> None:
        self.W1 = W1
        self.b1 = b1
        self.w2 = w2
        self.b2 = b2
        self.mean = mean
        self.std = std
        self.hyper = hyper

    # -- parameter flattening ------------------------------------------------

    def get_params(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.w2, [self.b2]])

    def set_params(self, flat: np.ndarray) -> None:
        h, d = self.W1.shape
        i = 0
        self.W1 = flat[i : i + h * d].reshape(h, d).copy()
        i += h * d
        self.b1 = flat[i : i + h].copy()
        i += h
        self.w2 = flat[i : i + h].copy()
        i += h
        self.b2 = float(flat[i])

    # -- training ----------------------------------------------------------------

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, hyper: dict, seed: int) -> "MlpModel":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std = np.where(std < 1e-12, 1.0, std)
        Z = (X - mean) / std

        rng = np.random.default_rng(seed)
        h = hyper["hidden"]
        d = X.shape[1]
        limit1 = np.sqrt(6.0 / (d + h))
        limit2 = np.sqrt(6.0 / (h + 1))
        model = cls(
            W1=rng.uniform(-limit1, limit1, (h, d)),
            b1=np.zeros(h),
            w2=rng.uniform(-limit2, limit2, h),
            b2=0.0,
            mean=mean,
            std=std,
            hyper=dict(hyper),
        )
        lr = hyper["learning_rate"]
        batch = hyper["batch_size"]
        n = Z.shape[0]
        for _ in range(hyper["epochs"]):
            order = rng.permutation(n)
            for start in range(0, n, batch):
                idx = order[start : start + batch]
                _, grad = model.loss_and_grad_standardized(Z[idx], y[idx])
                model.set_params(model.get_params() - lr * grad)
        return model

    def loss_and_grad_standardized(
        self, Z: np.ndarray, y: np.ndarray
    ) -> tuple[float, np.ndarray]:
        """Mean cross-entropy and its gradient w.r.t. the flat parameters,
        over already-standardized inputs."""
        n = Z.shape[0]
        a1 = np.tanh(Z @ self.W1.T + self.b1)
        p = _sigmoid(a1 @ self.w2 + self.b2)
        pc = np.clip(p, _EPS, 1 - _EPS)
        loss = float(-np.mean(y * np.log(pc) + (1 - y) * np.log(1 - pc)))

        delta2 = (p - y) / n  # dL/dz2
        gw2 = a1.T @ delta2
        gb2 = delta2.sum()
        delta1 = np.outer(delta2, self.w2) * (1 - a1 * a1)
        gW1 = delta1.T @ Z
        gb1 = delta1.sum(axis=0)
        grad = np.concatenate([gW1.ravel(), gb1, gw2, [gb2]])
        return loss, grad

    def loss_and_grad(self, X: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
        Z = (np.asarray(X, dtype=np.float64) - self.mean) / self.std
        return self.loss_and_grad_standardized(Z, np.asarray(y, dtype=np.float64))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Z = (np.asarray(X, dtype=np.float64) - self.mean) / self.std
        a1 = np.tanh(Z @ self.W1.T + self.b1)
        return _sigmoid(a1 @ self.w2 + self.b2)

    def to_dict(self) -> dict:
        return {
            "W1": self.W1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2,
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict, hyper: dict) -> "MlpModel":
        return cls(
            np.array(d["W1"]),
            np.array(d["b1"]),
            np.array(d["w2"]),
            float(d["b2"]),
            np.array(d["mean"]),
            np.array(d["std"]),
            hyper,
        )
