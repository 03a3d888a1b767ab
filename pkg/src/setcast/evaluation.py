"""Classifier evaluation: confusion-matrix statistics, probability-error
metrics, per-class diagnostics, and stratified k-fold cross-validation.

Metric conventions follow the common toolkit definitions so reports can be
compared line-for-line with standard output:

* MAE and RMSE average the absolute / squared differences between the
  predicted distribution and the one-hot actual over every (record, class)
  component, so a hard classifier has MAE = 1 - accuracy and
  RMSE = sqrt(1 - accuracy) exactly.
* Relative errors divide by the same error of a baseline predictor that
  always answers the training partition's add-one-smoothed class frequencies
  (computed per fold during cross-validation).
* ROC areas use the Mann-Whitney statistic with half credit for ties.
* Weighted averages weight each class by its actual-instance count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import naive_bayes, svm
from .dataset import CLASS_LABELS, Dataset, FoldAssignment, stratified_folds
from .errors import DataFormatError

DIST_TOL = 1e-9


@dataclass(frozen=True)
class PredictionRecord:
    """One evaluated sample: the actual class and the predicted distribution.

    ``predicted`` is the argmax of the distribution; an exact tie goes to the
    class listed first.
    """

    actual: str
    distribution: np.ndarray
    class_labels: tuple = CLASS_LABELS

    def __post_init__(self):
        dist = np.asarray(self.distribution, dtype=float)
        object.__setattr__(self, "distribution", dist)
        if dist.shape != (len(self.class_labels),):
            raise DataFormatError("distribution length must match class count")
        if (dist < 0).any() or abs(dist.sum() - 1.0) > DIST_TOL:
            raise DataFormatError(f"not a distribution: {dist}")
        if self.actual not in self.class_labels:
            raise DataFormatError(f"unknown actual class {self.actual!r}")

    @property
    def predicted(self) -> str:
        return self.class_labels[int(np.argmax(self.distribution))]


@dataclass(frozen=True)
class PerClassMetrics:
    label: str
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    roc_area: float


@dataclass(frozen=True)
class EvaluationReport:
    class_labels: tuple
    n: int
    correct: int
    accuracy: float
    kappa: float
    mae: float
    rmse: float
    rae: Optional[float]  # percent, None when no baseline was supplied
    rrse: Optional[float]
    confusion: np.ndarray  # rows = actual, cols = predicted
    per_class: tuple  # of PerClassMetrics
    weighted: PerClassMetrics
    warnings: tuple = ()
    fold_digest: Optional[str] = None

    @property
    def incorrect(self) -> int:
        return self.n - self.correct


def confusion_matrix(records, class_labels=CLASS_LABELS) -> np.ndarray:
    matrix = np.zeros((len(class_labels), len(class_labels)), dtype=int)
    index = {c: i for i, c in enumerate(class_labels)}
    for rec in records:
        matrix[index[rec.actual], index[rec.predicted]] += 1
    return matrix


def records_from_matrix(matrix, class_labels=CLASS_LABELS):
    """Expand a confusion matrix into hard one-hot prediction records."""
    matrix = np.asarray(matrix, dtype=int)
    records = []
    for ai, actual in enumerate(class_labels):
        for pi in range(len(class_labels)):
            onehot = np.zeros(len(class_labels))
            onehot[pi] = 1.0
            records.extend(
                PredictionRecord(actual, onehot, class_labels)
                for _ in range(matrix[ai, pi])
            )
    return records


def kappa_statistic(matrix) -> float:
    """Cohen's kappa: chance-corrected agreement of the confusion matrix."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.sum()
    if n == 0:
        raise DataFormatError("empty confusion matrix")
    po = np.trace(matrix) / n
    pe = float((matrix.sum(axis=1) * matrix.sum(axis=0)).sum()) / (n * n)
    if abs(1.0 - pe) < 1e-15:
        return 1.0  # only reachable when every record agrees in one class
    return (po - pe) / (1.0 - pe)


def absolute_errors(records):
    """(MAE, RMSE) of distributions against one-hot actuals, averaged over
    every record and class component."""
    abs_sum = sq_sum = 0.0
    components = 0
    for rec in records:
        target = np.zeros(len(rec.class_labels))
        target[rec.class_labels.index(rec.actual)] = 1.0
        diff = rec.distribution - target
        abs_sum += np.abs(diff).sum()
        sq_sum += (diff * diff).sum()
        components += diff.size
    if components == 0:
        raise DataFormatError("no prediction records")
    return abs_sum / components, math.sqrt(sq_sum / components)


def relative_errors(records, baselines):
    """(RAE %, RRSE %) against per-record baseline distributions."""
    base_records = [
        PredictionRecord(rec.actual, base, rec.class_labels)
        for rec, base in zip(records, baselines)
    ]
    mae, rmse = absolute_errors(records)
    base_mae, base_rmse = absolute_errors(base_records)
    if base_mae == 0 or base_rmse == 0:
        raise DataFormatError("baseline predictor has zero error")
    return 100.0 * mae / base_mae, 100.0 * rmse / base_rmse


def roc_area(records, class_index: int) -> float:
    """Mann-Whitney area under the ROC curve for one class, ties half credit.

    Degenerate record sets (no positives or no negatives) score 0.5.
    """
    labels = records[0].class_labels if records else CLASS_LABELS
    positive = labels[class_index]
    scores = np.array([rec.distribution[class_index] for rec in records])
    is_pos = np.array([rec.actual == positive for rec in records])
    pos, neg = scores[is_pos], scores[~is_pos]
    if pos.size == 0 or neg.size == 0:
        return 0.5
    wins = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((wins + 0.5 * ties) / (pos.size * neg.size))


def evaluate(records, baselines=None, fold_digest=None) -> EvaluationReport:
    """Build the full report from pooled prediction records."""
    if not records:
        raise DataFormatError("no prediction records")
    class_labels = records[0].class_labels
    matrix = confusion_matrix(records, class_labels)
    n = int(matrix.sum())
    correct = int(np.trace(matrix))
    accuracy = correct / n
    mae, rmse = absolute_errors(records)
    # bounded-range sanity: components live in [0, 1]
    assert mae <= rmse + 1e-12 and rmse <= math.sqrt(mae) + 1e-12
    rae = rrse = None
    if baselines is not None:
        rae, rrse = relative_errors(records, baselines)

    warnings = []
    per_class = []
    supports = matrix.sum(axis=1)
    for ci, label in enumerate(class_labels):
        tp = float(matrix[ci, ci])
        fn = float(supports[ci] - matrix[ci, ci])
        fp = float(matrix[:, ci].sum() - matrix[ci, ci])
        tn = float(n - tp - fn - fp)
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        fp_rate = fp / (fp + tn) if fp + tn > 0 else 0.0
        if tp + fp > 0:
            precision = tp / (tp + fp)
        else:
            precision = 0.0
            warnings.append(f"class {label} never predicted; precision set to 0")
        f_measure = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        per_class.append(
            PerClassMetrics(
                label, recall, fp_rate, precision, recall, f_measure,
                roc_area(records, ci),
            )
        )
    weights = supports / n
    weighted = PerClassMetrics(
        "weighted",
        *(
            float(sum(w * getattr(pc, name) for w, pc in zip(weights, per_class)))
            for name in ("tp_rate", "fp_rate", "precision", "recall", "f_measure",
                         "roc_area")
        ),
    )
    return EvaluationReport(
        class_labels,
        n,
        correct,
        accuracy,
        kappa_statistic(matrix),
        mae,
        rmse,
        rae,
        rrse,
        matrix,
        tuple(per_class),
        weighted,
        tuple(warnings),
        fold_digest,
    )


class NaiveBayesLearner:
    """Adapter giving the naive Bayes trainer the cross-validation interface."""

    def __init__(self, **train_options):
        self.train_options = train_options

    def describe(self) -> str:
        return "nb"

    def fit(self, dataset: Dataset):
        model = naive_bayes.train(dataset, **self.train_options)
        return lambda x: naive_bayes.predict_distribution(model, x)


class SvmLearner:
    """Adapter giving the SMO trainer the cross-validation interface;
    distributions are one-hot on the hard classification."""

    def __init__(self, kernel=None, config=None):
        self.kernel = kernel or svm.linear_kernel()
        self.config = config or svm.TrainerConfig()

    def describe(self) -> str:
        return f"svm ({self.kernel.describe()}, C={self.config.C})"

    def fit(self, dataset: Dataset):
        model = svm.train_smo(dataset, self.kernel, self.config)
        return lambda x: svm.hard_distribution(model, x)


def smoothed_class_distribution(dataset: Dataset) -> np.ndarray:
    """Add-one-smoothed class frequencies, the per-fold baseline predictor."""
    counts = dataset.class_counts()
    k = len(dataset.class_labels)
    return np.array(
        [(counts[c] + 1) / (len(dataset) + k) for c in dataset.class_labels]
    )


def cross_validate(
    dataset: Dataset, learner, k: int, seed: int, jobs: int = 1
):
    """Stratified k-fold cross-validation of a learner.

    Returns (EvaluationReport, FoldAssignment).  Folds may be evaluated in
    parallel with ``jobs`` threads; records are pooled in (fold, within-fold)
    order either way, so the report is deterministic for a fixed seed.
    """
    folds = stratified_folds(dataset, k, seed)

    def run_fold(f: int):
        train_set = dataset.subset(folds.train_indices(f))
        predictor = learner.fit(train_set)
        baseline = smoothed_class_distribution(train_set)
        out = []
        for i in folds.test_indices(f):
            dist = predictor(dataset.features[i])
            out.append(
                (PredictionRecord(dataset.labels[i], dist, dataset.class_labels),
                 baseline)
            )
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_fold = list(pool.map(run_fold, range(k)))
    else:
        per_fold = [run_fold(f) for f in range(k)]

    records = [rec for fold in per_fold for rec, _ in fold]
    baselines = [base for fold in per_fold for _, base in fold]
    report = evaluate(records, baselines, fold_digest=folds.digest())
    return report, folds


def _fmt(value: float, digits: int = 4) -> str:
    return f"{value:.{digits}f}"


def render_text(report: EvaluationReport) -> str:
    """Plain-text report: summary block, per-class table, confusion matrix."""
    lines = ["=== Summary ==="]
    width = 40
    lines.append(
        f"{'Correctly classified instances':{width}s}"
        f"{report.correct:6d}    {_fmt(100 * report.accuracy)} %"
    )
    lines.append(
        f"{'Incorrectly classified instances':{width}s}"
        f"{report.incorrect:6d}    {_fmt(100 * (1 - report.accuracy))} %"
    )
    lines.append(f"{'Kappa statistic':{width}s}{_fmt(report.kappa):>10s}")
    lines.append(f"{'Mean absolute error':{width}s}{_fmt(report.mae):>10s}")
    lines.append(f"{'Root mean squared error':{width}s}{_fmt(report.rmse):>10s}")
    if report.rae is not None:
        lines.append(
            f"{'Relative absolute error':{width}s}{_fmt(report.rae):>10s} %"
        )
        lines.append(
            f"{'Root relative squared error':{width}s}{_fmt(report.rrse):>10s} %"
        )
    lines.append(f"{'Total number of instances':{width}s}{report.n:6d}")
    if report.fold_digest:
        lines.append(f"{'Fold assignment digest':{width}s}{report.fold_digest:>12s}")

    lines.append("")
    lines.append("=== Detailed accuracy by class ===")
    header = ("TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "ROC Area")
    lines.append("".join(f"{h:>11s}" for h in header) + "   Class")
    for pc in report.per_class:
        row = (pc.tp_rate, pc.fp_rate, pc.precision, pc.recall, pc.f_measure,
               pc.roc_area)
        lines.append("".join(f"{_fmt(v, 3):>11s}" for v in row) + f"   {pc.label}")
    wrow = (report.weighted.tp_rate, report.weighted.fp_rate,
            report.weighted.precision, report.weighted.recall,
            report.weighted.f_measure, report.weighted.roc_area)
    lines.append("".join(f"{_fmt(v, 3):>11s}" for v in wrow) + "   Weighted avg.")

    lines.append("")
    lines.append("=== Confusion matrix ===")
    tags = [chr(ord("a") + i) for i in range(len(report.class_labels))]
    lines.append(" ".join(f"{t:>5s}" for t in tags) + "   <-- classified as")
    for ci, label in enumerate(report.class_labels):
        lines.append(
            " ".join(f"{int(v):5d}" for v in report.confusion[ci])
            + f" |  {tags[ci]} = {label}"
        )
    for warning in report.warnings:
        lines.append(f"note: {warning}")
    return "\n".join(lines) + "\n"


def render_machine(report: EvaluationReport) -> str:
    """Key-value report with every field at full precision."""
    lines = [
        f"classes = {','.join(report.class_labels)}",
        f"instances = {report.n}",
        f"correct = {report.correct}",
        f"incorrect = {report.incorrect}",
        f"accuracy = {report.accuracy:.17g}",
        f"kappa = {report.kappa:.17g}",
        f"mae = {report.mae:.17g}",
        f"rmse = {report.rmse:.17g}",
    ]
    if report.rae is not None:
        lines.append(f"rae_percent = {report.rae:.17g}")
        lines.append(f"rrse_percent = {report.rrse:.17g}")
    for ci, actual in enumerate(report.class_labels):
        for pi, predicted in enumerate(report.class_labels):
            lines.append(
                f"confusion.{actual}.{predicted} = {int(report.confusion[ci, pi])}"
            )
    for pc in report.per_class:
        for name in ("tp_rate", "fp_rate", "precision", "recall", "f_measure",
                     "roc_area"):
            lines.append(f"class.{pc.label}.{name} = {getattr(pc, name):.17g}")
    for name in ("tp_rate", "fp_rate", "precision", "recall", "f_measure",
                 "roc_area"):
        lines.append(f"weighted.{name} = {getattr(report.weighted, name):.17g}")
    if report.fold_digest:
        lines.append(f"fold_digest = {report.fold_digest}")
    for i, warning in enumerate(report.warnings):
        lines.append(f"warning.{i} = {warning}")
    return "\n".join(lines) + "\n"
