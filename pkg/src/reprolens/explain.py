"""Exact Shapley attributions over the nine-feature space.

With nine features there are only 2^9 = 512 coalitions, so attributions are
computed exactly: the value of a coalition S is the model's mean output over
composites that take the explained instance on S and a background row
elsewhere (the interventional value function). Every (instance, background
row) pair costs exactly 512 model evaluations; all of them go through one
batched predict call.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .analyzer.features import FEATURE_NAMES, N_FEATURES
from .errors import ExplainError
from .models.base import TrainedModel, predict_proba

N_COALITIONS = 1 << N_FEATURES

# mask matrix: row c has bit pattern of coalition c
_MASKS = ((np.arange(N_COALITIONS)[:, None] >> np.arange(N_FEATURES)[None, :]) & 1).astype(bool)

# Shapley weights by coalition size: w_in[s] weights v(S) for S containing i
# (|S| = s), w_out[s] weights -v(S) for S missing i (|S| = s)
_FACT = [math.factorial(s) for s in range(N_FEATURES + 1)]
_W_IN = np.array(
    [0.0] + [_FACT[s - 1] * _FACT[N_FEATURES - s] / _FACT[N_FEATURES] for s in range(1, N_FEATURES + 1)]
)
_W_OUT = np.array(
    [_FACT[s] * _FACT[N_FEATURES - s - 1] / _FACT[N_FEATURES] for s in range(N_FEATURES)] + [0.0]
)
_SIZES = _MASKS.sum(axis=1)


@dataclass(frozen=True)
class ShapleyExplanation:
    phi: np.ndarray  # length 9, attribution per feature
    base_value: float  # expected model output over the background
    prediction: float  # model output at the instance
    instance: np.ndarray

    def as_dict(self) -> dict:
        return {
            "phi": {name: float(v) for name, v in zip(FEATURE_NAMES, self.phi)},
            "base_value": self.base_value,
            "prediction": self.prediction,
            "instance": {name: float(v) for name, v in zip(FEATURE_NAMES, self.instance)},
        }


def exact_shapley(
    m: TrainedModel, x: np.ndarray, background: np.ndarray
) -> ShapleyExplanation:
    """Exact attributions of one prediction against a background sample."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape != (N_FEATURES,):
        raise ExplainError(f"instance must have width {N_FEATURES}, got {x.shape}")
    background = np.atleast_2d(np.asarray(background, dtype=np.float64))
    if background.size == 0:
        raise ExplainError("background sample must be non-empty")
    if background.shape[1] != N_FEATURES:
        raise ExplainError(f"background width must be {N_FEATURES}")
    b = background.shape[0]

    # composites[c, j] = x where coalition c includes the feature, else row j
    composites = np.where(
        _MASKS[:, None, :], x[None, None, :], background[None, :, :]
    ).reshape(N_COALITIONS * b, N_FEATURES)
    outputs = np.asarray(predict_proba(m, composites), dtype=np.float64)
    v = outputs.reshape(N_COALITIONS, b).mean(axis=1)

    phi = np.empty(N_FEATURES)
    w_in = _W_IN[_SIZES]
    w_out = _W_OUT[_SIZES]
    for i in range(N_FEATURES):
        has_i = _MASKS[:, i]
        phi[i] = np.sum(v[has_i] * w_in[has_i]) - np.sum(v[~has_i] * w_out[~has_i])

    return ShapleyExplanation(
        phi=phi,
        base_value=float(v[0]),
        prediction=float(v[-1]),
        instance=x,
    )


def background_sample(X: np.ndarray, size: int = 100, seed: int = 0) -> np.ndarray:
    """Seeded background rows: the whole set when it is small enough."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] <= size:
        return X.copy()
    rng = np.random.default_rng(seed)
    idx = rng.choice(X.shape[0], size=size, replace=False)
    return X[np.sort(idx)]


# -- global importance ---------------------------------------------------------


@dataclass(frozen=True)
class GlobalImportance:
    mean_abs_phi: dict[str, float]
    ranking: tuple[str, ...]  # descending; ties keep feature order


def global_importance(explanations: list[ShapleyExplanation]) -> GlobalImportance:
    if not explanations:
        raise ExplainError("need at least one explanation")
    mat = np.stack([e.phi for e in explanations])
    mean_abs = np.abs(mat).mean(axis=0)
    order = np.argsort(-mean_abs, kind="stable")
    return GlobalImportance(
        mean_abs_phi={name: float(v) for name, v in zip(FEATURE_NAMES, mean_abs)},
        ranking=tuple(FEATURE_NAMES[i] for i in order),
    )


# -- plot-data export -------------------------------------------------------------

PLOT_SCHEMA_VERSION = "1"


def export_plot_data(kind: str, payload) -> dict:
    """Plot-ready JSON documents for beeswarm, waterfall and force charts."""
    if kind == "waterfall":
        return _export_waterfall(_require_single(kind, payload))
    if kind == "force":
        return _export_force(_require_single(kind, payload))
    if kind == "beeswarm":
        if not isinstance(payload, (list, tuple)) or not payload or not all(
            isinstance(e, ShapleyExplanation) for e in payload
        ):
            raise ExplainError("beeswarm needs a non-empty list of explanations")
        return _export_beeswarm(list(payload))
    raise ExplainError(f"unknown export kind {kind!r}")


def _require_single(kind: str, payload) -> ShapleyExplanation:
    if not isinstance(payload, ShapleyExplanation):
        raise ExplainError(f"{kind} needs a single explanation")
    return payload


def _export_waterfall(e: ShapleyExplanation) -> dict:
    order = np.argsort(-np.abs(e.phi), kind="stable")
    rows = [
        {
            "feature": FEATURE_NAMES[i],
            "feature_value": float(e.instance[i]),
            "phi": float(e.phi[i]),
        }
        for i in order
    ]
    return {
        "kind": "waterfall",
        "version": PLOT_SCHEMA_VERSION,
        "base_value": e.base_value,
        "prediction": e.prediction,
        "rows": rows,
    }


def _export_force(e: ShapleyExplanation) -> dict:
    positive = []
    negative = []
    for i in np.argsort(-np.abs(e.phi), kind="stable"):
        row = {
            "feature": FEATURE_NAMES[i],
            "feature_value": float(e.instance[i]),
            "phi": float(e.phi[i]),
        }
        (positive if e.phi[i] >= 0 else negative).append(row)
    return {
        "kind": "force",
        "version": PLOT_SCHEMA_VERSION,
        "base_value": e.base_value,
        "prediction": e.prediction,
        "check_sum": e.base_value + float(np.sum(e.phi)),
        "positive": positive,
        "negative": negative,
    }


def _export_beeswarm(explanations: list[ShapleyExplanation]) -> dict:
    rows = []
    for n, e in enumerate(explanations):
        for i, name in enumerate(FEATURE_NAMES):
            rows.append(
                {
                    "instance": n,
                    "feature": name,
                    "feature_value": float(e.instance[i]),
                    "phi": float(e.phi[i]),
                }
            )
    return {"kind": "beeswarm", "version": PLOT_SCHEMA_VERSION, "rows": rows}


def beeswarm_csv(doc: dict) -> str:
    if doc.get("kind") != "beeswarm":
        raise ExplainError("not a beeswarm document")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["instance", "feature", "feature_value", "phi"])
    for row in doc["rows"]:
        writer.writerow(
            [row["instance"], row["feature"], repr(row["feature_value"]), repr(row["phi"])]
        )
    return buf.getvalue()


def waterfall_svg(doc: dict, width: int = 640, bar_height: int = 24) -> str:
    """Minimal static SVG rendering of a waterfall document."""
    if doc.get("kind") != "waterfall":
        raise ExplainError("not a waterfall document")
    rows = doc["rows"]
    height = bar_height * (len(rows) + 2)
    max_abs = max((abs(r["phi"]) for r in rows), default=0.0) or 1.0
    mid = width * 0.55
    scale = (width * 0.35) / max_abs
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="monospace" font-size="12">',
        f'<text x="4" y="{bar_height - 8}">base={doc["base_value"]:.4f} '
        f'prediction={doc["prediction"]:.4f}</text>',
    ]
    y = bar_height
    for row in rows:
        w = abs(row["phi"]) * scale
        x = mid - w if row["phi"] < 0 else mid
        color = "#d65f5f" if row["phi"] < 0 else "#4878d0"
        parts.append(
            f'<rect x="{x:.1f}" y="{y + 4}" width="{max(w, 0.5):.1f}" '
            f'height="{bar_height - 8}" fill="{color}"/>'
        )
        parts.append(
            f'<text x="4" y="{y + bar_height - 8}">{row["feature"]}='
            f'{row["feature_value"]:g} ({row["phi"]:+.4f})</text>'
        )
        y += bar_height
    parts.append(f'<line x1="{mid}" y1="{bar_height}" x2="{mid}" y2="{y}" stroke="#333"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def export_to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
