"""Per-class precision/recall/F1 and accuracy from a pooled confusion matrix.

Confusion layout: rows are actual classes, columns predicted, ordered
[Reproducible, Irreproducible]. Zero-denominator precision/recall are 0 by
convention, and the F1 of (0, 0) is 0.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from ..errors import MetricsError

CLASS_NAMES = ("Reproducible", "Irreproducible")


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    per_class: dict[str, ClassMetrics]
    accuracy: float
    confusion: tuple[tuple[int, int], tuple[int, int]]


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def compute_metrics(confusion) -> MetricsReport:
    arr = np.asarray(confusion, dtype=np.int64)
    if arr.shape != (2, 2):
        raise MetricsError(f"confusion must be 2x2, got {arr.shape}")
    if np.any(arr < 0):
        raise MetricsError("confusion counts must be non-negative")
    total = int(arr.sum())
    if total == 0:
        raise MetricsError("confusion is all zero")

    per_class: dict[str, ClassMetrics] = {}
    for k, name in enumerate(CLASS_NAMES):
        tp = float(arr[k, k])
        precision = _safe_div(tp, float(arr[:, k].sum()))
        recall = _safe_div(tp, float(arr[k, :].sum()))
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[name] = ClassMetrics(precision, recall, f1)
    accuracy = float(np.trace(arr)) / total
    return MetricsReport(per_class, accuracy, tuple(map(tuple, arr.tolist())))


def render_metrics_table(reports: dict[str, MetricsReport]) -> str:
    """Text table: one technique per block, one row per class."""
    lines = [
        f"{'Technique':<16}{'Category':<16}{'Precision':>10}{'Recall':>10}"
        f"{'F1-Score':>10}{'Accuracy':>10}"
    ]
    for family, report in reports.items():
        for i, name in enumerate(CLASS_NAMES):
            m = report.per_class[name]
            acc = f"{report.accuracy * 100:.1f}%" if i == 0 else ""
            lines.append(
                f"{family if i == 0 else '':<16}{name:<16}"
                f"{m.precision * 100:>9.1f}%{m.recall * 100:>9.1f}%"
                f"{m.f1 * 100:>9.1f}%{acc:>10}"
            )
    return "\n".join(lines) + "\n"


def metrics_to_csv(reports: dict[str, MetricsReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["technique", "category", "precision", "recall", "f1", "accuracy"])
    for family, report in reports.items():
        for name in CLASS_NAMES:
            m = report.per_class[name]
            writer.writerow(
                [
                    family,
                    name.lower(),
                    f"{m.precision:.6f}",
                    f"{m.recall:.6f}",
                    f"{m.f1:.6f}",
                    f"{report.accuracy:.6f}",
                ]
            )
    return buf.getvalue()
