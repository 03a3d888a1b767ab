"""Command-line experiment runner.

Subcommands
-----------
ingest    raw daily price series -> labeled percent-change samples
train     fit a model and write it to a flat key = value file
predict   apply a saved model to a sample file, emitting label + distribution
cv        stratified k-fold cross-validation with a full metric report
compare   run both classifiers on identical folds, side by side

Exit codes: 0 success, 2 usage or precondition violation, 3 I/O failure,
4 training failure.  The bundled 30-sample dataset is used when --data is
omitted; the environment variable SETCAST_DATA_DIR points the default lookup
at a different directory.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from importlib import resources

import numpy as np

from . import dataset as ds
from . import evaluation, naive_bayes, svm
from .errors import DataFormatError, TrainingError

DATA_DIR_ENV = "SETCAST_DATA_DIR"
DEFAULT_DATA_FILE = "set_samples.csv"

_SMOOTHING = {"add-one": "add_one", "reciprocal": "reciprocal_fallback"}


def default_data_path() -> str:
    """Bundled fixture path, overridable via SETCAST_DATA_DIR."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return os.path.join(override, DEFAULT_DATA_FILE)
    return str(resources.files("setcast").joinpath("data", DEFAULT_DATA_FILE))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setcast",
        description="Train and evaluate SET direction classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, model_flag=True):
        p.add_argument("--data", help="labeled-sample CSV (default: bundled dataset)")
        if model_flag:
            p.add_argument("--model", choices=("nb", "svm"), default="nb")
        p.add_argument("--priors", choices=("frequency", "uniform"),
                       default="frequency", help="naive Bayes prior mode")
        p.add_argument("--smoothing", choices=tuple(_SMOOTHING), default="add-one",
                       help="naive Bayes categorical smoothing")
        p.add_argument("--kernel", choices=(svm.LINEAR, svm.POLY, svm.RBF),
                       default=svm.LINEAR)
        p.add_argument("--degree", type=int, default=2,
                       help="polynomial kernel degree")
        p.add_argument("--delta-sq", type=float, default=1.0,
                       help="RBF kernel bandwidth delta^2")
        p.add_argument("--cost", type=float, default=1.0, help="SVM box constraint C")
        p.add_argument("--kkt-tol", type=float, default=1e-3)
        p.add_argument("--max-passes", type=int, default=100)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--output", help="write to this path instead of stdout")

    p_ingest = sub.add_parser("ingest", help="build labeled samples from raw prices")
    p_ingest.add_argument("--data", required=True, help="raw-series CSV")
    p_ingest.add_argument("--output", required=True, help="labeled-sample CSV to write")
    p_ingest.set_defaults(func=cmd_ingest)

    p_train = sub.add_parser("train", help="fit a model on a sample file")
    add_common(p_train)
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="apply a saved model to samples")
    p_predict.add_argument("--model-file", required=True)
    p_predict.add_argument("--data", help="sample CSV (default: bundled dataset)")
    p_predict.add_argument("--output", help="prediction CSV to write")
    p_predict.set_defaults(func=cmd_predict)

    p_cv = sub.add_parser("cv", help="stratified k-fold cross-validation")
    add_common(p_cv)
    p_cv.add_argument("--folds", type=int, default=10)
    p_cv.add_argument("--format", choices=("text", "machine"), default="text")
    p_cv.add_argument("--jobs", type=int, default=1)
    p_cv.set_defaults(func=cmd_cv)

    p_cmp = sub.add_parser("compare", help="both classifiers on identical folds")
    add_common(p_cmp, model_flag=False)
    p_cmp.add_argument("--folds", type=int, default=10)
    p_cmp.add_argument("--format", choices=("text", "machine"), default="text")
    p_cmp.add_argument("--jobs", type=int, default=1)
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def _data_path(args) -> str:
    return args.data if args.data else default_data_path()


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _make_learner(args):
    if args.model == "nb":
        return evaluation.NaiveBayesLearner(
            priors=args.priors, smoothing=_SMOOTHING[args.smoothing]
        )
    return evaluation.SvmLearner(_kernel_from_args(args), _config_from_args(args))


def _kernel_from_args(args) -> svm.KernelSpec:
    if args.kernel == svm.POLY:
        return svm.polynomial_kernel(args.degree)
    if args.kernel == svm.RBF:
        return svm.rbf_kernel(args.delta_sq)
    return svm.linear_kernel()


def _config_from_args(args) -> svm.TrainerConfig:
    return svm.TrainerConfig(
        C=args.cost, kkt_tol=args.kkt_tol, max_passes=args.max_passes, seed=args.seed
    )


def _config_lines(args, *, model=None) -> list:
    lines = [f"data = {_data_path(args)}"]
    if model:
        lines.append(f"model = {model}")
    lines.append(f"folds = {args.folds}")
    lines.append(f"seed = {args.seed}")
    return lines


def cmd_ingest(args) -> int:
    series = ds.load_raw_series(args.data)
    table = ds.build_training_table(series)
    ds.save_samples(table, args.output)
    return 0


def cmd_train(args) -> int:
    data = ds.load_samples(_data_path(args))
    if not args.output:
        raise DataFormatError("train requires --output for the model file")
    if args.model == "nb":
        model = naive_bayes.train(
            data, priors=args.priors, smoothing=_SMOOTHING[args.smoothing]
        )
        naive_bayes.save_model(model, args.output)
    else:
        model = svm.train_smo(data, _kernel_from_args(args), _config_from_args(args))
        svm.save_model(model, args.output)
        if not model.converged:
            print("warning: SMO hit the pass budget before converging",
                  file=sys.stderr)
    return 0


def _load_sample_matrix(path) -> np.ndarray:
    """Feature rows of a sample CSV; the label column is optional and
    ignored.  An empty (header-only) file yields a (0, d) matrix."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataFormatError(f"{path}: missing header")
        header = [h.strip() for h in header]
        if header == list(ds.ATTRIBUTE_NAMES) + [ds.LABEL_COLUMN]:
            width = len(ds.ATTRIBUTE_NAMES)
        elif header == list(ds.ATTRIBUTE_NAMES):
            width = len(ds.ATTRIBUTE_NAMES)
        else:
            raise DataFormatError(f"{path}: unrecognized sample header")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row[:width]])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
    return np.array(rows, dtype=float).reshape(len(rows), width)


def _load_any_model(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if first == "model = nb":
        model = naive_bayes.load_model(path)
        return model, lambda x: naive_bayes.predict_distribution(model, x), \
            model.class_labels
    if first == "model = svm":
        model = svm.load_model(path)
        return model, lambda x: svm.hard_distribution(model, x), ds.CLASS_LABELS
    raise DataFormatError(f"{path}: unreadable model file")


def cmd_predict(args) -> int:
    _, predictor, class_labels = _load_any_model(args.model_file)
    X = _load_sample_matrix(args.data if args.data else default_data_path())
    lines = ["PREDICTED," + ",".join(f"P_{c}" for c in class_labels)]
    for x in X:
        dist = predictor(x)
        label = class_labels[int(np.argmax(dist))]
        lines.append(label + "," + ",".join(format(p, ".17g") for p in dist))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_cv(args) -> int:
    data = ds.load_samples(_data_path(args))
    learner = _make_learner(args)
    report, _ = evaluation.cross_validate(
        data, learner, args.folds, args.seed, jobs=args.jobs
    )
    if args.format == "machine":
        header = _config_lines(args, model=learner.describe())
        text = "\n".join(header) + "\n" + evaluation.render_machine(report)
    else:
        text = (
            f"Cross-validation: {learner.describe()}, {args.folds} folds, "
            f"seed {args.seed}\n\n" + evaluation.render_text(report)
        )
    _emit(text, args.output)
    return 0


_COMPARE_ROWS = (
    ("Accuracy (%)", lambda r: 100 * r.accuracy),
    ("Mean absolute error", lambda r: r.mae),
    ("Root mean squared error", lambda r: r.rmse),
    ("Relative absolute error (%)", lambda r: r.rae),
    ("Root relative squared error (%)", lambda r: r.rrse),
)


def cmd_compare(args) -> int:
    data = ds.load_samples(_data_path(args))
    if any(count == 0 for count in data.class_counts().values()):
        raise DataFormatError("both classes must be present to compare models")
    nb_learner = evaluation.NaiveBayesLearner(
        priors=args.priors, smoothing=_SMOOTHING[args.smoothing]
    )
    svm_learner = evaluation.SvmLearner(_kernel_from_args(args),
                                        _config_from_args(args))
    nb_report, nb_folds = evaluation.cross_validate(
        data, nb_learner, args.folds, args.seed, jobs=args.jobs
    )
    svm_report, svm_folds = evaluation.cross_validate(
        data, svm_learner, args.folds, args.seed, jobs=args.jobs
    )
    if nb_folds.digest() != svm_folds.digest():
        raise AssertionError("fold assignments diverged between models")

    if args.format == "machine":
        lines = _config_lines(args)
        lines.append(f"fold_digest = {nb_folds.digest()}")
        for prefix, report in (("nb", nb_report), ("svm", svm_report)):
            for line in evaluation.render_machine(report).splitlines():
                lines.append(f"{prefix}.{line}")
        _emit("\n".join(lines) + "\n", args.output)
        return 0

    width = 34
    lines = [
        f"Model comparison on identical folds (k={args.folds}, seed {args.seed}, "
        f"digest {nb_folds.digest()})",
        "",
        f"{'':{width}s}{'naive Bayes':>16s}{'SVM':>16s}",
    ]
    for name, extract in _COMPARE_ROWS:
        lines.append(
            f"{name:{width}s}{extract(nb_report):>16.4f}{extract(svm_report):>16.4f}"
        )
    text = "\n".join(lines) + "\n"
    for title, report in (("naive Bayes", nb_report), ("SVM", svm_report)):
        text += f"\n=== {title} ===\n" + evaluation.render_text(report)
    _emit(text, args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
