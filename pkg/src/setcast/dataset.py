"""Market data plumbing: labeled samples, the percent-change feature pipeline,
and deterministic stratified fold assignment.

A labeled sample holds the daily percentage changes of six market series
(Nikkei, Hang Seng, SET, USD/THB, S&P 500, gold) plus the next day's SET
direction.  Raw price series can be converted into such samples with
:func:`build_training_table`.
"""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError

UP = "UP"
DOWN = "DOWN"
#: Fixed class order; also the row/column order of every confusion matrix.
CLASS_LABELS = (UP, DOWN)

#: Attribute order of the labeled-sample CSV format.
ATTRIBUTE_NAMES = ("NK", "HS", "SET", "USDTHB", "SP500", "GOLD")
LABEL_COLUMN = "SET_DIRECTION"

#: Column order of the raw-series CSV format.
RAW_COLUMNS = ("NK", "HS", "SET_CLOSE", "SET_OPEN", "USDTHB", "SP500", "GOLD")


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of labeled samples.

    ``features`` has shape (n, d); ``labels`` is a length-n tuple of class
    names drawn from ``class_labels``.
    """

    features: np.ndarray
    labels: tuple
    attribute_names: tuple = ATTRIBUTE_NAMES
    class_labels: tuple = CLASS_LABELS

    def __post_init__(self):
        object.__setattr__(self, "features", np.asarray(self.features, dtype=float))
        if self.features.ndim != 2 or len(self.labels) != self.features.shape[0]:
            raise DataFormatError("features must be (n, d) with one label per row")
        if not np.isfinite(self.features).all():
            raise DataFormatError("all feature values must be finite")
        unknown = set(self.labels) - set(self.class_labels)
        if unknown:
            raise DataFormatError(f"labels outside class_labels: {sorted(unknown)}")

    def __len__(self):
        return self.features.shape[0]

    def class_counts(self):
        """Per-class sample counts, in class_labels order."""
        return {c: sum(lab == c for lab in self.labels) for c in self.class_labels}

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(
            self.features[idx],
            tuple(self.labels[i] for i in idx),
            self.attribute_names,
            self.class_labels,
        )


@dataclass(frozen=True)
class RawSeries:
    """Daily price rows for the seven raw columns; NaN marks a missing value."""

    dates: tuple
    values: np.ndarray  # shape (n, len(RAW_COLUMNS))

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True)
class FoldAssignment:
    """Per-sample fold indices for k-fold cross-validation."""

    k: int
    assignment: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def digest(self) -> str:
        """Short stable fingerprint, for asserting two runs shared one split."""
        raw = np.asarray(self.assignment, dtype=np.int64).tobytes()
        return hashlib.sha256(raw + bytes([self.k])).hexdigest()[:12]


def percent_change(prev: float, curr: float) -> float:
    """Day-over-day percentage change 100 * (curr - prev) / prev."""
    if prev <= 0:
        raise DataFormatError(f"previous price must be positive, got {prev}")
    return 100.0 * (curr - prev) / prev


def label_direction(open_price: float, close_price: float) -> str:
    """UP when the close exceeds the open, DOWN otherwise (tie counts as DOWN)."""
    if open_price <= 0 or close_price <= 0:
        raise DataFormatError("prices must be positive")
    return UP if close_price > open_price else DOWN


def load_samples(path) -> Dataset:
    """Read a labeled-sample CSV (header NK,HS,SET,USDTHB,SP500,GOLD,SET_DIRECTION)."""
    expected = list(ATTRIBUTE_NAMES) + [LABEL_COLUMN]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != expected:
            raise DataFormatError(f"{path}: expected header {','.join(expected)}")
        rows = []
        labels = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise DataFormatError(
                    f"{path}:{lineno}: expected {len(expected)} columns, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row[:-1]])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
            token = row[-1].strip().upper()
            if token not in CLASS_LABELS:
                raise DataFormatError(f"{path}:{lineno}: unknown label {row[-1]!r}")
            labels.append(token)
    if not rows:
        raise DataFormatError(f"{path}: empty dataset")
    return Dataset(np.array(rows), tuple(labels))


def save_samples(dataset: Dataset, path) -> None:
    """Write a Dataset back to the labeled-sample CSV format."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(dataset.attribute_names) + [LABEL_COLUMN])
        for x, label in zip(dataset.features, dataset.labels):
            writer.writerow([format(v, ".10g") for v in x] + [label])


def load_raw_series(path) -> RawSeries:
    """Read a raw-series CSV (header DATE,NK,HS,SET_CLOSE,SET_OPEN,USDTHB,SP500,GOLD).

    Empty cells become NaN (missing); those days are later skipped by
    :func:`build_training_table`.
    """
    expected = ["DATE"] + list(RAW_COLUMNS)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != expected:
            raise DataFormatError(f"{path}: expected header {','.join(expected)}")
        dates = []
        values = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise DataFormatError(
                    f"{path}:{lineno}: expected {len(expected)} columns, got {len(row)}"
                )
            dates.append(row[0].strip())
            parsed = []
            for cell in row[1:]:
                cell = cell.strip()
                if not cell:
                    parsed.append(np.nan)
                    continue
                try:
                    parsed.append(float(cell))
                except ValueError as exc:
                    raise DataFormatError(f"{path}:{lineno}: {exc}") from None
            values.append(parsed)
    return RawSeries(tuple(dates), np.array(values, dtype=float).reshape(len(dates), len(RAW_COLUMNS)))


def build_training_table(series: RawSeries) -> Dataset:
    """Convert raw daily prices into labeled percent-change samples.

    Days with any missing value are dropped first.  Each remaining run of
    three consecutive days (t-2, t-1, t) yields one sample: the features are
    the t-2 -> t-1 percentage changes of the six input series and the label is
    the direction of day t's SET session (open vs. close).
    """
    keep = np.flatnonzero(np.isfinite(series.values).all(axis=1))
    if len(keep) < 3:
        raise DataFormatError("need at least 3 complete days to build samples")
    vals = series.values[keep]
    col = {name: i for i, name in enumerate(RAW_COLUMNS)}
    feature_cols = [col[c] for c in ("NK", "HS", "SET_CLOSE", "USDTHB", "SP500", "GOLD")]
    rows = []
    labels = []
    for t in range(2, len(vals)):
        prev2, prev1, today = vals[t - 2], vals[t - 1], vals[t]
        rows.append([percent_change(prev2[c], prev1[c]) for c in feature_cols])
        labels.append(label_direction(today[col["SET_OPEN"]], today[col["SET_CLOSE"]]))
    return Dataset(np.array(rows), tuple(labels))


def stratified_folds(dataset: Dataset, k: int, seed: int) -> FoldAssignment:
    """Deterministic stratified fold assignment.

    Samples of each class are shuffled with a generator seeded by ``seed`` and
    dealt round-robin into the k folds, continuing the deal across classes so
    fold sizes stay within one of each other and each class spreads evenly.
    """
    n = len(dataset)
    if not 2 <= k <= n:
        raise DataFormatError(f"fold count must satisfy 2 <= k <= {n}, got {k}")
    counts = dataset.class_counts()
    missing = [c for c, cnt in counts.items() if cnt == 0]
    if missing:
        raise DataFormatError(f"class with zero samples: {missing}")
    rng = np.random.default_rng(seed)
    labels = np.array(dataset.labels, dtype=object)
    assignment = np.empty(n, dtype=int)
    pointer = 0
    for c in dataset.class_labels:
        idx = np.flatnonzero(labels == c)
        rng.shuffle(idx)
        for i in idx:
            assignment[i] = pointer % k
            pointer += 1
    return FoldAssignment(k, assignment)
