"""Contingency analysis, chi-square significance tests and Borda ranking.

The p-value machinery is self-contained: the survival function of the
chi-square distribution is evaluated through the regularized upper incomplete
gamma function Q(df/2, x/2), with a series expansion on one side of the
crossover and a Lentz continued fraction on the other. df=1 and df=2 use
their closed forms.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .dataset import LOC_BIN_VALUES, REPRODUCIBLE, Dataset, loc_bins
from .analyzer.features import FEATURE_NAMES
from .errors import StatsError

COLUMN_LABELS = ("Reproducible", "Irreproducible")


@dataclass(frozen=True)
class ContingencyTable:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        r = len(self.row_labels)
        c = len(self.col_labels)
        if r < 2 or c < 2:
            raise StatsError(f"need at least a 2x2 table, got {r}x{c}")
        if len(self.counts) != r or any(len(row) != c for row in self.counts):
            raise StatsError("counts shape does not match labels")
        arr = np.array(self.counts)
        if np.any(arr < 0):
            raise StatsError("counts must be non-negative")
        if arr.sum() == 0:
            raise StatsError("table total must be positive")
        if np.any(arr.sum(axis=1) == 0):
            raise StatsError("table has an all-zero row")
        if np.any(arr.sum(axis=0) == 0):
            raise StatsError("table has an all-zero column")

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.float64)


@dataclass(frozen=True)
class ChiSquareResult:
    chi2: float
    df: int
    p: float
    yates_applied: bool


def contingency(ds: Dataset, feature: str) -> ContingencyTable:
    """Tally one feature against the labels over real examples only.

    LOC is binned short/medium/long first; booleans produce true/false rows;
    tri-states produce rows for the observed values among +1/0/-1.
    """
    if feature not in FEATURE_NAMES:
        raise StatsError(f"unknown feature {feature!r}")
    real = ds.real_only()
    if len(real) == 0:
        raise StatsError("no real examples to tally")
    col = FEATURE_NAMES.index(feature)
    values = real.X[:, col]

    if feature == "loc":
        bins = loc_bins(real)
        cats = np.array([b.value for b in bins])
        candidate_rows = LOC_BIN_VALUES
        row_of = {name: name for name in LOC_BIN_VALUES}
        keys = cats
    elif col in (6, 7, 8):
        candidate_rows = ("+1", "0", "-1")
        row_of = {1.0: "+1", 0.0: "0", -1.0: "-1"}
        keys = values
    else:
        candidate_rows = ("true", "false")
        row_of = {1.0: "true", 0.0: "false"}
        keys = values

    tallies: dict[str, list[int]] = {name: [0, 0] for name in candidate_rows}
    for key, label in zip(keys, real.y):
        name = row_of.get(key if isinstance(key, str) else float(key))
        if name is None:
            raise StatsError(f"feature {feature!r} holds non-categorical value {key!r}")
        tallies[name][0 if label == REPRODUCIBLE else 1] += 1

    rows = [name for name in candidate_rows if sum(tallies[name]) > 0]
    counts = tuple(tuple(tallies[name]) for name in rows)
    return ContingencyTable(tuple(rows), COLUMN_LABELS, counts)


def chi_square(t: ContingencyTable, yates: bool | None = None) -> ChiSquareResult:
    """Pearson chi-square test of independence.

    For 2x2 tables the Yates continuity correction is applied by default
    (|O-E| reduced by 0.5, clipped at zero); larger tables use the plain
    statistic. Pass ``yates`` explicitly to override.
    """
    obs = t.as_array()
    r, c = obs.shape
    if yates is None:
        yates = r == 2 and c == 2
    row_tot = obs.sum(axis=1, keepdims=True)
    col_tot = obs.sum(axis=0, keepdims=True)
    expected = row_tot @ col_tot / obs.sum()
    diff = np.abs(obs - expected)
    if yates:
        diff = np.maximum(diff - 0.5, 0.0)
    chi2 = float(np.sum(diff * diff / expected))
    df = (r - 1) * (c - 1)
    return ChiSquareResult(chi2, df, chi_square_sf(chi2, df), bool(yates))


# -- chi-square survival function --------------------------------------------

_MAX_ITER = 400
_EPS = 1e-16


def _lower_gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by series expansion."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _upper_gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi_square_sf(x: float, df: int) -> float:
    """P(X >= x) for a chi-square variable with df degrees of freedom."""
    if df < 1:
        raise StatsError(f"df must be >= 1, got {df}")
    if x < 0:
        raise StatsError(f"statistic must be non-negative, got {x}")
    if x == 0.0:
        return 1.0
    if df == 1:
        return math.erfc(math.sqrt(x / 2.0))
    if df == 2:
        return math.exp(-x / 2.0)
    a = df / 2.0
    half = x / 2.0
    if half < a + 1.0:
        return max(0.0, min(1.0, 1.0 - _lower_gamma_series(a, half)))
    return max(0.0, min(1.0, _upper_gamma_cf(a, half)))


# -- Borda count ----------------------------------------------------------------

_BORDA_POINTS = (3, 2, 1)


def borda_count(
    rankings: list[list[str]], candidates: list[str] | None = None
) -> dict[str, int]:
    """Score top-3 rankings: first choice 3 points, second 2, third 1.

    Unranked candidates score 0. Returns a dict ordered by descending score,
    ties broken alphabetically.
    """
    scores: dict[str, int] = {c: 0 for c in candidates} if candidates else {}
    for ranking in rankings:
        if not 1 <= len(ranking) <= 3:
            raise StatsError(f"a ranking must list 1-3 candidates, got {len(ranking)}")
        if len(set(ranking)) != len(ranking):
            raise StatsError(f"duplicate candidate in ranking {ranking!r}")
        for pos, cand in enumerate(ranking):
            scores[cand] = scores.get(cand, 0) + _BORDA_POINTS[pos]
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return dict(ordered)


# -- feature significance report --------------------------------------------------


def feature_impact_report(ds: Dataset, alpha: float = 0.05) -> list[dict]:
    """Chi-square results for all nine features against the labels."""
    rows = []
    for feature in FEATURE_NAMES:
        table = contingency(ds, feature)
        result = chi_square(table)
        rows.append(
            {
                "feature": feature,
                "chi2": result.chi2,
                "df": result.df,
                "p": result.p,
                "significant": result.p < alpha,
            }
        )
    return rows


def report_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", "chi2", "df", "p", "significant_at_0.05"])
    for row in rows:
        writer.writerow(
            [
                row["feature"],
                f"{row['chi2']:.6g}",
                row["df"],
                f"{row['p']:.6g}",
                "yes" if row["significant"] else "no",
            ]
        )
    return buf.getvalue()
