"""Decision trees grown from scratch: Gini classification and MSE regression.

Nodes live in flat parallel arrays so batch prediction can route whole index
blocks instead of walking samples one at a time. Split search follows the
random-subset rule: candidate features are inspected in a seeded random
order, at least ``max_features`` of them, continuing past the quota only
until some valid split is found.
"""

from __future__ import annotations

import numpy as np

_LEAF = -1


class _TreeBuilder:
    def __init__(self) -> None:
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add(self) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(0.0)
        return len(self.feature) - 1


class Tree:
    """A fitted tree; ``value`` holds the class-1 vote share or regression
    output of each leaf."""

    def __init__(self, feature, threshold, left, right, value) -> None:
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.float64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            f = self.feature[node]
            if f == _LEAF:
                out[idx] = self.value[node]
                continue
            go_left = X[idx, f] <= self.threshold[node]
            stack.append((self.left[node], idx[go_left]))
            stack.append((self.right[node], idx[~go_left]))
        return out

    def leaf_of(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            f = self.feature[node]
            if f == _LEAF:
                out[idx] = node
                continue
            go_left = X[idx, f] <= self.threshold[node]
            stack.append((self.left[node], idx[go_left]))
            stack.append((self.right[node], idx[~go_left]))
        return out

    def n_leaves(self) -> int:
        return int(np.sum(self.feature == _LEAF))

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"])


def _best_split_gini(x: np.ndarray, y: np.ndarray) -> tuple[float, float] | None:
    """Best (score, threshold) for one feature under weighted Gini; None if
    the feature is constant on this node. Lower score is better.

    Boundary sets and cumulative counts depend only on the value partition,
    not on the order of equal elements, so the default sort is fine.
    """
    order = x.argsort()
    xs = x[order]
    boundaries = (xs[1:] != xs[:-1]).nonzero()[0]
    if boundaries.size == 0:
        return None
    ys = y[order]
    n = xs.size
    total_pos = ys.sum()
    cum_pos = ys.cumsum()[boundaries]
    n_left = boundaries + 1.0
    n_right = n - n_left
    pos_right = total_pos - cum_pos
    gini = (
        2.0 * cum_pos * (n_left - cum_pos) / n_left
        + 2.0 * pos_right * (n_right - pos_right) / n_right
    )
    best = int(gini.argmin())
    threshold = (xs[boundaries[best]] + xs[boundaries[best] + 1]) / 2.0
    return float(gini[best]) / n, threshold


def _best_split_mse(x: np.ndarray, r: np.ndarray) -> tuple[float, float] | None:
    """Best (score, threshold) for one feature under MSE; score is the
    negative sum-of-squares gain, so lower is better."""
    order = x.argsort()
    xs = x[order]
    boundaries = (xs[1:] != xs[:-1]).nonzero()[0]
    if boundaries.size == 0:
        return None
    rs = r[order]
    n = xs.size
    total = rs.sum()
    cum = rs.cumsum()[boundaries]
    n_left = boundaries + 1.0
    n_right = n - n_left
    gain = cum * cum / n_left + (total - cum) * (total - cum) / n_right
    best = int(gain.argmax())
    threshold = (xs[boundaries[best]] + xs[boundaries[best] + 1]) / 2.0
    return -float(gain[best]), threshold


def grow_tree(
    X: np.ndarray,
    target: np.ndarray,
    mode: str,
    rng: np.random.Generator,
    max_features: int,
    max_depth: int | None = None,
    min_samples_split: int = 2,
) -> Tree:
    """Grow a tree top-down; mode is "gini" (target in {0,1}) or "mse"."""
    X = np.asarray(X, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    n_features = X.shape[1]
    split_fn = _best_split_gini if mode == "gini" else _best_split_mse
    builder = _TreeBuilder()

    def grow(idx: np.ndarray, depth: int) -> int:
        node = builder.add()
        t = target[idx]
        total = float(t.sum())
        if mode == "gini":
            pure = total == 0.0 or total == t.size
        else:
            pure = bool((t == t[0]).all())
        if (
            pure
            or idx.size < min_samples_split
            or (max_depth is not None and depth >= max_depth)
        ):
            builder.value[node] = total / t.size
            return node
        best: tuple[float, float, int] | None = None
        feat_order = rng.permutation(n_features)
        for rank, f in enumerate(feat_order):
            if rank >= max_features and best is not None:
                break
            found = split_fn(X[idx, f], t)
            if found is None:
                continue
            score, threshold = found
            if best is None or score < best[0]:
                best = (score, threshold, int(f))
        if best is None:
            builder.value[node] = total / t.size
            return node
        _, threshold, f = best
        go_left = X[idx, f] <= threshold
        left_idx = idx[go_left]
        right_idx = idx[~go_left]
        builder.feature[node] = f
        builder.threshold[node] = threshold
        builder.left[node] = grow(left_idx, depth + 1)
        builder.right[node] = grow(right_idx, depth + 1)
        return node

    grow(np.arange(X.shape[0]), 0)
    return Tree(builder.feature, builder.threshold, builder.left, builder.right, builder.value)
