"""Labeled-example storage, encoding, SMOTE, folding, LOC binning, synthesis.

Encoding order is fixed by FEATURE_NAMES: [loc, has_method, has_main,
has_class, parsable, compilable, native_import, external_import,
exception_handling]. Booleans map to {0,1}, tri-states pass through, LOC is
kept unscaled (tree models are scale-free; MLP and k-NN standardize
internally).

SMOTE note: neighbor search would be dominated by the LOC axis if distances
were taken on raw vectors, so LOC is min-max scaled for the neighbor search
only; interpolation happens in original coordinates. Synthetic coordinates
stay continuous, faithful to plain SMOTE; ``round_tri_states`` snaps them to
legal values for categorical model families.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .analyzer.features import FEATURE_NAMES, N_FEATURES, FeatureVector
from .errors import DatasetError, FoldError, SingleClassError, TooFewMinorityError

SCHEMA_VERSION = "1"

LOC_COL = 0
BOOL_COLS = (1, 2, 3, 4, 5)
TRI_COLS = (6, 7, 8)


class Label(enum.Enum):
    REPRODUCIBLE = "reproducible"
    IRREPRODUCIBLE = "irreproducible"


class Origin(enum.Enum):
    REAL = "real"
    SYNTHETIC = "synthetic"


# numeric label codes used in the y arrays; reproducibility is the positive class
REPRODUCIBLE, IRREPRODUCIBLE = 1, 0

_LABEL_TO_CODE = {Label.REPRODUCIBLE: REPRODUCIBLE, Label.IRREPRODUCIBLE: IRREPRODUCIBLE}
_CODE_TO_LABEL = {v: k for k, v in _LABEL_TO_CODE.items()}


@dataclass(frozen=True)
class LabeledExample:
    features: FeatureVector
    label: Label
    origin: Origin = Origin.REAL
    source_id: int | None = None

    def __post_init__(self) -> None:
        if self.origin is Origin.SYNTHETIC and self.source_id is not None:
            raise DatasetError("synthetic examples carry no source post id")


def encode(v: FeatureVector) -> np.ndarray:
    """Encode a FeatureVector as a float vector in the documented order."""
    return np.array(
        [
            float(v.loc),
            float(v.has_method),
            float(v.has_main),
            float(v.has_class),
            float(v.parsable),
            float(v.compilable),
            float(v.native_import),
            float(v.external_import),
            float(v.exception_handling),
        ],
        dtype=np.float64,
    )


class Dataset:
    """Immutable table of encoded examples with labels and provenance."""

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        origins: Sequence[Origin] | np.ndarray | None = None,
        source_ids: Sequence[int | None] | None = None,
        schema_version: str = SCHEMA_VERSION,
    ) -> None:
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != N_FEATURES:
            raise DatasetError(f"X must be (n, {N_FEATURES}), got {X.shape}")
        if y.shape != (X.shape[0],):
            raise DatasetError("y length must match X")
        if not np.all(np.isin(y, (REPRODUCIBLE, IRREPRODUCIBLE))):
            raise DatasetError("labels must be 0 (irreproducible) or 1 (reproducible)")
        n = X.shape[0]
        if origins is None:
            synthetic = np.zeros(n, dtype=bool)
        elif isinstance(origins, np.ndarray) and origins.dtype == bool:
            synthetic = origins.copy()
        else:
            synthetic = np.array([o is Origin.SYNTHETIC for o in origins], dtype=bool)
        if synthetic.shape != (n,):
            raise DatasetError("origins length must match X")
        if source_ids is None:
            source_ids = [None] * n
        if len(source_ids) != n:
            raise DatasetError("source_ids length must match X")
        self.X = X
        self.y = y
        self.synthetic = synthetic
        self.source_ids = tuple(source_ids)
        self.schema_version = schema_version
        self.X.setflags(write=False)
        self.y.setflags(write=False)
        self.synthetic.setflags(write=False)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_examples(cls, examples: Iterable[LabeledExample]) -> "Dataset":
        examples = list(examples)
        if not examples:
            raise DatasetError("cannot build a dataset from zero examples")
        X = np.stack([encode(e.features) for e in examples])
        y = np.array([_LABEL_TO_CODE[e.label] for e in examples], dtype=np.int64)
        return cls(X, y, [e.origin for e in examples], [e.source_id for e in examples])

    # -- basics ------------------------------------------------------------

    def __len__(self) -> int:
        return self.X.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.synthetic, other.synthetic)
            and self.source_ids == other.source_ids
        )

    def origin_of(self, i: int) -> Origin:
        return Origin.SYNTHETIC if self.synthetic[i] else Origin.REAL

    def class_counts(self) -> dict[int, int]:
        return {
            REPRODUCIBLE: int(np.sum(self.y == REPRODUCIBLE)),
            IRREPRODUCIBLE: int(np.sum(self.y == IRREPRODUCIBLE)),
        }

    def subset(self, indices: np.ndarray | Sequence[int]) -> "Dataset":
        idx = np.asarray(indices)
        if idx.dtype == bool:
            idx = np.flatnonzero(idx)
        idx = idx.astype(np.int64)
        return Dataset(
            self.X[idx],
            self.y[idx],
            self.synthetic[idx],
            [self.source_ids[i] for i in idx],
            self.schema_version,
        )

    def real_only(self) -> "Dataset":
        return self.subset(np.flatnonzero(~self.synthetic))

    def concat(self, other: "Dataset") -> "Dataset":
        return Dataset(
            np.vstack([self.X, other.X]),
            np.concatenate([self.y, other.y]),
            np.concatenate([self.synthetic, other.synthetic]),
            list(self.source_ids) + list(other.source_ids),
            self.schema_version,
        )


# -- SMOTE -------------------------------------------------------------------


def _neighbor_table(Xm: np.ndarray, k: int) -> np.ndarray:
    """k nearest minority neighbors per minority row, ties to the lower index.

    LOC is min-max scaled over the minority block for the distance only.
    """
    scaled = Xm.copy()
    lo, hi = scaled[:, LOC_COL].min(), scaled[:, LOC_COL].max()
    if hi > lo:
        scaled[:, LOC_COL] = (scaled[:, LOC_COL] - lo) / (hi - lo)
    else:
        scaled[:, LOC_COL] = 0.0
    diff = scaled[:, None, :] - scaled[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")  # stable => tie to lower index
    return order[:, :k]


def smote(ds: Dataset, k: int = 5, seed: int = 0, round_tri_states: bool = False) -> Dataset:
    """Oversample the minority class to the majority count by interpolation.

    Each synthetic point is x + delta*(x_nn - x) with delta uniform in [0,1]
    and x_nn one of the k nearest minority neighbors of x. Originals are
    preserved verbatim and synthetics are appended tagged origin=synthetic.
    """
    counts = ds.class_counts()
    if counts[REPRODUCIBLE] == 0 or counts[IRREPRODUCIBLE] == 0:
        raise SingleClassError("SMOTE needs both classes present")
    minority_code = min(counts, key=lambda c: (counts[c], c))
    n_min = counts[minority_code]
    n_maj = len(ds) - n_min
    if n_min < 2:
        raise TooFewMinorityError("SMOTE needs at least two minority examples")
    need = n_maj - n_min
    if need == 0:
        return ds.subset(np.arange(len(ds)))

    rng = np.random.default_rng(seed)
    min_idx = np.flatnonzero(ds.y == minority_code)
    Xm = ds.X[min_idx]
    k_eff = min(k, n_min - 1)
    neighbors = _neighbor_table(Xm, k_eff)

    rows = np.empty((need, N_FEATURES), dtype=np.float64)
    for t in range(need):
        i = t % n_min
        j = neighbors[i, rng.integers(k_eff)]
        delta = rng.random()
        rows[t] = Xm[i] + delta * (Xm[j] - Xm[i])
    if round_tri_states:
        rows[:, LOC_COL] = np.maximum(1.0, np.rint(rows[:, LOC_COL]))
        for c in BOOL_COLS:
            rows[:, c] = np.where(rows[:, c] >= 0.5, 1.0, 0.0)
        for c in TRI_COLS:
            rows[:, c] = np.clip(np.rint(rows[:, c]), -1.0, 1.0)
        # keep the pinned implications valid after snapping
        rows[:, 5] = np.minimum(rows[:, 5], rows[:, 4])  # compilable => parsable
        rows[:, 1] = np.maximum(rows[:, 1], rows[:, 2])  # main => method

    synth = Dataset(
        rows,
        np.full(need, minority_code, dtype=np.int64),
        np.ones(need, dtype=bool),
        [None] * need,
        ds.schema_version,
    )
    return ds.concat(synth)


# -- stratified k-fold ---------------------------------------------------------


def stratified_kfold(ds: Dataset, k: int = 10, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Deterministic stratified folds; test sets partition the dataset."""
    if k < 2:
        raise FoldError(f"k must be >= 2, got {k}")
    counts = ds.class_counts()
    for code, cnt in counts.items():
        if 0 < cnt < k:
            raise FoldError(f"class {code} has {cnt} examples, fewer than k={k}")
    if counts[REPRODUCIBLE] == 0 or counts[IRREPRODUCIBLE] == 0:
        raise SingleClassError("stratified folding needs both classes")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(ds), dtype=np.int64)
    for code in (REPRODUCIBLE, IRREPRODUCIBLE):
        idx = np.flatnonzero(ds.y == code)
        rng.shuffle(idx)
        fold_of[idx] = np.arange(len(idx)) % k
    folds = []
    all_idx = np.arange(len(ds))
    for f in range(k):
        test = all_idx[fold_of == f]
        train = all_idx[fold_of != f]
        folds.append((train, test))
    return folds


# -- LOC binning ---------------------------------------------------------------

LOC_BIN_VALUES = ("short", "medium", "long")


@dataclass(frozen=True)
class LocBin:
    value: str
    p25: float
    p75: float

    def __post_init__(self) -> None:
        if self.value not in LOC_BIN_VALUES:
            raise DatasetError(f"unknown LOC bin {self.value!r}")


def _nearest_rank(sorted_vals: np.ndarray, q: float) -> float:
    n = len(sorted_vals)
    rank = max(1, math.ceil(q * n))
    return float(sorted_vals[rank - 1])


def loc_bins(ds: Dataset) -> list[LocBin]:
    """Bin each example's LOC as short/medium/long around nearest-rank p25/p75."""
    if len(ds) == 0:
        raise DatasetError("cannot bin an empty dataset")
    locs = ds.X[:, LOC_COL]
    sorted_vals = np.sort(locs)
    p25 = _nearest_rank(sorted_vals, 0.25)
    p75 = _nearest_rank(sorted_vals, 0.75)
    out = []
    for v in locs:
        if v < p25:
            value = "short"
        elif v > p75:
            value = "long"
        else:
            value = "medium"
        out.append(LocBin(value, p25, p75))
    return out


# -- synthetic corpus ----------------------------------------------------------

# Per-class generator parameters. The boolean/tri-state rates and the LOC
# mixture (share of 1-2 line snippets, mean length) reproduce the observed
# per-class frequencies of the nine features; the lognormal sigmas were
# calibrated so the rounded, clipped draws hit the target means.
_LOC_LOG_MEDIAN = math.log(19.0)

_CLASS_PARAMS = {
    REPRODUCIBLE: dict(
        method=0.67,
        main=0.55,
        cls=0.54,
        parsable=0.507,
        compilable=0.311,
        native_plus=0.51 * 162 / 270,
        native_minus=0.49 * 162 / 270,
        external=(0.40, 0.38, 0.22),
        exception=(0.35, 0.45, 0.20),
        short=0.059,
        sigma=1.0873,
    ),
    IRREPRODUCIBLE: dict(
        method=0.55,
        main=0.21,
        cls=0.39,
        parsable=0.379,
        compilable=0.011,
        native_plus=0.34 * 46 / 87,
        native_minus=0.66 * 46 / 87,
        external=(0.10, 0.32, 0.58),
        exception=(0.33, 0.45, 0.22),
        short=0.138,
        sigma=1.5305,
    ),
}

# Share of examples whose presence features are driven by one latent
# "completeness" draw (complete snippets bundle class/main/parsability/
# compilability together; fragments lack them together). The rest are drawn
# independently. Marginals are preserved either way; the coupling is what
# makes the corpus separable at desk scale.
_BUNDLE_WEIGHT = 0.85


def _tri_from_u(u: np.ndarray, p_plus: float, p_minus: float) -> np.ndarray:
    return np.where(u < p_plus, 1.0, np.where(u > 1.0 - p_minus, -1.0, 0.0))


def _gen_class(n: int, p: dict, rng: np.random.Generator) -> np.ndarray:
    bundled = rng.random(n) < _BUNDLE_WEIGHT
    u = rng.random(n)

    b_method = u < p["method"]
    b_main = u < p["main"]
    b_cls = u < p["cls"]
    b_parsable = u < p["parsable"]
    b_compilable = u < p["compilable"]
    b_native = _tri_from_u(u, p["native_plus"], p["native_minus"])
    b_external = _tri_from_u(u, p["external"][0], p["external"][2])

    i_main = rng.random(n) < p["main"]
    p_method_rest = (p["method"] - p["main"]) / (1.0 - p["main"])
    i_method = np.where(i_main, True, rng.random(n) < p_method_rest)
    i_cls = rng.random(n) < p["cls"]
    i_parsable = rng.random(n) < p["parsable"]
    i_compilable = i_parsable & (rng.random(n) < p["compilable"] / p["parsable"])
    i_native = _tri_from_u(rng.random(n), p["native_plus"], p["native_minus"])
    i_external = _tri_from_u(rng.random(n), p["external"][0], p["external"][2])

    method = np.where(bundled, b_method, i_method)
    main = np.where(bundled, b_main, i_main)
    cls = np.where(bundled, b_cls, i_cls)
    parsable = np.where(bundled, b_parsable, i_parsable)
    compilable = np.where(bundled, b_compilable, i_compilable)
    native = np.where(bundled, b_native, i_native)
    external = np.where(bundled, b_external, i_external)
    exception = _tri_from_u(rng.random(n), p["exception"][0], p["exception"][2])

    short = rng.random(n) < p["short"]
    loc = np.where(
        short,
        rng.integers(1, 3, n).astype(np.float64),
        np.maximum(3.0, np.rint(rng.lognormal(_LOC_LOG_MEDIAN, p["sigma"], n))),
    )
    return np.column_stack(
        [loc, method, main, cls, parsable, compilable, native, external, exception]
    ).astype(np.float64)


def synth_corpus(n_repro: int, n_irrepro: int, seed: int = 0) -> Dataset:
    """Generate a labeled corpus matching the observed per-class feature rates.

    Rows play the role of real observations (origin=real); determinism is
    guaranteed for a fixed seed.
    """
    if n_repro < 1 or n_irrepro < 1:
        raise DatasetError("both class counts must be >= 1")
    rng = np.random.default_rng(seed)
    Xr = _gen_class(n_repro, _CLASS_PARAMS[REPRODUCIBLE], rng)
    Xi = _gen_class(n_irrepro, _CLASS_PARAMS[IRREPRODUCIBLE], rng)
    X = np.vstack([Xr, Xi])
    y = np.concatenate(
        [
            np.full(n_repro, REPRODUCIBLE, dtype=np.int64),
            np.full(n_irrepro, IRREPRODUCIBLE, dtype=np.int64),
        ]
    )
    return Dataset(X, y)


# -- persistence ----------------------------------------------------------------

CSV_HEADER = list(FEATURE_NAMES) + ["label", "origin"]


def _format_value(v: float) -> str:
    return repr(float(v))


def dumps_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for i in range(len(ds)):
        row = [_format_value(v) for v in ds.X[i]]
        row.append(_CODE_TO_LABEL[int(ds.y[i])].value)
        row.append(Origin.SYNTHETIC.value if ds.synthetic[i] else Origin.REAL.value)
        writer.writerow(row)
    return buf.getvalue()


def save_csv(ds: Dataset, path: str | Path) -> None:
    Path(path).write_text(dumps_csv(ds), encoding="utf-8")


def loads_csv(text: str) -> Dataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty CSV") from None
    extra_source = header == CSV_HEADER + ["source_id"]
    if header != CSV_HEADER and not extra_source:
        raise DatasetError(f"unexpected CSV header {header!r}")
    X_rows, labels, origins, source_ids = [], [], [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        expected = len(CSV_HEADER) + (1 if extra_source else 0)
        if len(row) != expected:
            raise DatasetError(f"line {lineno}: expected {expected} columns, got {len(row)}")
        try:
            X_rows.append([float(v) for v in row[:N_FEATURES]])
        except ValueError as exc:
            raise DatasetError(f"line {lineno}: {exc}") from None
        try:
            labels.append(_LABEL_TO_CODE[Label(row[N_FEATURES])])
            origins.append(Origin(row[N_FEATURES + 1]))
        except ValueError as exc:
            raise DatasetError(f"line {lineno}: {exc}") from None
        if extra_source:
            raw = row[N_FEATURES + 2]
            source_ids.append(int(raw) if raw else None)
        else:
            source_ids.append(None)
    if not X_rows:
        raise DatasetError("CSV contains no data rows")
    return Dataset(np.array(X_rows), np.array(labels), origins, source_ids)


def load_csv(path: str | Path) -> Dataset:
    return loads_csv(Path(path).read_text(encoding="utf-8"))


def save_jsonl(ds: Dataset, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(ds)):
            rec = {
                "x": [float(v) for v in ds.X[i]],
                "label": _CODE_TO_LABEL[int(ds.y[i])].value,
                "origin": Origin.SYNTHETIC.value if ds.synthetic[i] else Origin.REAL.value,
                "source_id": ds.source_ids[i],
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_jsonl(path: str | Path) -> Dataset:
    X_rows, labels, origins, source_ids = [], [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                X_rows.append([float(v) for v in rec["x"]])
                labels.append(_LABEL_TO_CODE[Label(rec["label"])])
                origins.append(Origin(rec["origin"]))
                source_ids.append(rec.get("source_id"))
            except (KeyError, ValueError) as exc:
                raise DatasetError(f"line {lineno}: {exc}") from None
    if not X_rows:
        raise DatasetError("JSONL contains no records")
    return Dataset(np.array(X_rows), np.array(labels), origins, source_ids)
