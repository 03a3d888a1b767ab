"""Soft-margin support vector machine in dual form, trained by sequential
minimal optimization.

The decision function is f(x) = b + sum_i alpha_i y_i K(x_i, x) with
0 <= alpha_i <= C and sum_i alpha_i y_i = 0.  The trainer repeatedly picks the
maximal violating pair -- the sample pushing the KKT gap up hardest against
the sample pushing it down hardest -- and solves the two-variable subproblem
analytically.  That working-set rule needs no randomness, makes the solver
fully deterministic, and stops via a bias-free gap criterion, so a final bias
computed from the free support vectors always satisfies the KKT conditions
within the configured tolerance on convergence.

Class mapping is fixed: UP -> +1, DOWN -> -1, and a decision value of exactly
zero classifies as DOWN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import CLASS_LABELS, DOWN, UP, Dataset
from .errors import DataFormatError, TrainingError

LINEAR = "linear"
POLY = "poly"
RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: linear x.z, polynomial (x.z + 1)^degree, or
    RBF exp(-||x - z||^2 / delta_sq)."""

    kind: str
    degree: int | None = None
    delta_sq: float | None = None

    def __post_init__(self):
        if self.kind == LINEAR:
            ok = self.degree is None and self.delta_sq is None
        elif self.kind == POLY:
            ok = isinstance(self.degree, int) and self.degree >= 1 and self.delta_sq is None
        elif self.kind == RBF:
            ok = self.degree is None and self.delta_sq is not None and self.delta_sq > 0
        else:
            ok = False
        if not ok:
            raise DataFormatError(f"invalid kernel spec {self!r}")

    def describe(self) -> str:
        if self.kind == POLY:
            return f"poly degree={self.degree}"
        if self.kind == RBF:
            return f"rbf delta_sq={self.delta_sq}"
        return "linear"


def linear_kernel() -> KernelSpec:
    return KernelSpec(LINEAR)


def polynomial_kernel(degree: int) -> KernelSpec:
    return KernelSpec(POLY, degree=degree)


def rbf_kernel(delta_sq: float) -> KernelSpec:
    return KernelSpec(RBF, delta_sq=delta_sq)


@dataclass(frozen=True)
class TrainerConfig:
    """SMO settings.

    ``max_passes`` bounds the optimization effort: each pass performs at most
    n two-variable updates, and the solver stops early once the largest KKT
    violation falls within ``kkt_tol``.  ``seed`` is accepted for interface
    stability but unused: the maximal-violating-pair solver is deterministic.
    """

    C: float = 1.0
    kkt_tol: float = 1e-3
    max_passes: int = 100
    seed: int = 0

    def __post_init__(self):
        if not (self.C > 0 and self.kkt_tol > 0 and self.max_passes >= 1):
            raise DataFormatError(f"invalid trainer config {self!r}")


@dataclass(frozen=True)
class SvmModel:
    """Dual-form model; only support vectors (alpha > 0) are stored.

    ``kkt_violation`` is the largest per-sample KKT violation measured on the
    training set right after optimization; ``converged`` is true when it fell
    within the configured tolerance before the pass budget ran out.
    """

    support_vectors: np.ndarray  # (m, d)
    coefficients: np.ndarray  # alpha, (m,)
    labels: np.ndarray  # +-1, (m,)
    bias: float
    kernel: KernelSpec
    C: float
    converged: bool
    kkt_violation: float = float("nan")


def kernel_eval(spec: KernelSpec, x, z) -> float:
    """Evaluate the kernel on a single pair of equal-length vectors."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise DataFormatError(f"dimension mismatch: {x.shape} vs {z.shape}")
    if spec.kind == LINEAR:
        return float(x @ z)
    if spec.kind == POLY:
        return float((x @ z + 1.0) ** spec.degree)
    diff = x - z
    return float(np.exp(-(diff @ diff) / spec.delta_sq))


def kernel_matrix(spec: KernelSpec, X, Z) -> np.ndarray:
    """Kernel evaluations between the rows of X (n, d) and Z (m, d)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if X.shape[1] != Z.shape[1]:
        raise DataFormatError(f"dimension mismatch: {X.shape[1]} vs {Z.shape[1]}")
    inner = X @ Z.T
    if spec.kind == LINEAR:
        return inner
    if spec.kind == POLY:
        return (inner + 1.0) ** spec.degree
    sq = (X * X).sum(axis=1)[:, None] + (Z * Z).sum(axis=1)[None, :] - 2.0 * inner
    return np.exp(-np.maximum(sq, 0.0) / spec.delta_sq)


def labels_to_pm1(labels) -> np.ndarray:
    """Map UP -> +1.0 and DOWN -> -1.0."""
    return np.where(np.asarray(labels, dtype=object) == UP, 1.0, -1.0)


def train_smo(dataset: Dataset, kernel: KernelSpec, config: TrainerConfig) -> SvmModel:
    """Solve the dual problem on a two-class dataset.

    Raises TrainingError when only one class is present or fewer than two
    samples exist.  On hitting the pass budget the best iterate is returned
    with ``converged=False`` rather than failing.
    """
    n = len(dataset)
    if n < 2:
        raise TrainingError("need at least 2 training samples")
    counts = dataset.class_counts()
    if any(cnt == 0 for cnt in counts.values()):
        raise TrainingError(f"single-class training data: {counts}")
    X = dataset.features
    y = labels_to_pm1(dataset.labels)
    K = kernel_matrix(kernel, X, X)
    C, tol = config.C, config.kkt_tol

    alpha = np.zeros(n)
    g = np.zeros(n)  # g_i = sum_j alpha_j y_j K_ij
    snap = 1e-10 * max(1.0, C)
    budget = config.max_passes * n
    converged = False
    for _ in range(budget):
        F = y - g
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        Fu = np.where(up, F, -np.inf)
        Fl = np.where(low, F, np.inf)
        i = int(np.argmax(Fu))
        j = int(np.argmin(Fl))
        if Fu[i] - Fl[j] <= tol:
            converged = True
            break
        s = y[i] * y[j]
        ai_old, aj_old = alpha[i], alpha[j]
        if s < 0:
            lo, hi = max(0.0, aj_old - ai_old), min(C, C + aj_old - ai_old)
        else:
            lo, hi = max(0.0, ai_old + aj_old - C), min(C, ai_old + aj_old)
        if lo >= hi:
            break  # most violating pair cannot move: genuinely stuck
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta > 0:
            aj_new = float(np.clip(aj_old - y[j] * (F[i] - F[j]) / eta, lo, hi))
        else:
            aj_new = lo if _dual_delta(alpha, y, K, i, j, s, lo) >= _dual_delta(
                alpha, y, K, i, j, s, hi
            ) else hi
        if aj_new == aj_old:
            break
        ai_new = ai_old + s * (aj_old - aj_new)
        if ai_new < snap:
            ai_new = 0.0
        elif ai_new > C - snap:
            ai_new = C
        if aj_new < snap:
            aj_new = 0.0
        elif aj_new > C - snap:
            aj_new = C
        g += (ai_new - ai_old) * y[i] * K[:, i] + (aj_new - aj_old) * y[j] * K[:, j]
        alpha[i], alpha[j] = ai_new, aj_new

    _repair_equality(alpha, y, C)
    g = K @ (alpha * y)
    b = _fit_bias(alpha, y, g, C)
    worst = _worst_violation(alpha, y, g + b, C)
    return _package(X, alpha, y, b, kernel, C, converged and worst <= tol, worst)


def _dual_delta(alpha, y, K, i, j, s, aj_value):
    """Dual objective with (alpha_i, alpha_j) moved along the constraint line."""
    a = alpha.copy()
    a[j] = aj_value
    a[i] = alpha[i] + s * (alpha[j] - aj_value)
    ay = a * y
    return a.sum() - 0.5 * ay @ K @ ay


def _repair_equality(alpha, y, C):
    """Absorb accumulated floating-point drift of sum(alpha * y) into the
    free coefficient with the most room."""
    residual = float(alpha @ y)
    if residual == 0.0:
        return
    free = np.flatnonzero((alpha > 0) & (alpha < C))
    order = free[np.argsort(-np.minimum(alpha[free], C - alpha[free]))]
    for i in order:
        candidate = alpha[i] - y[i] * residual
        if 0.0 <= candidate <= C:
            alpha[i] = candidate
            return


def _fit_bias(alpha, y, g, C):
    """Bias from the mean margin residual of free support vectors, falling
    back to the midpoint of the feasible interval when none are free."""
    F = y - g
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(F[free].mean())
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
    lo = F[up].max() if up.any() else -math.inf
    hi = F[low].min() if low.any() else math.inf
    if math.isfinite(lo) and math.isfinite(hi):
        return float((lo + hi) / 2.0)
    if math.isfinite(lo):
        return float(lo)
    return float(hi) if math.isfinite(hi) else 0.0


def _worst_violation(alpha, y, f, C):
    """Largest KKT violation over all training samples given f = g + b."""
    yf = y * f
    worst = 0.0
    for i in range(len(y)):
        if alpha[i] <= 0:
            worst = max(worst, 1.0 - yf[i])
        elif alpha[i] >= C:
            worst = max(worst, yf[i] - 1.0)
        else:
            worst = max(worst, abs(yf[i] - 1.0))
    return worst


def _package(X, alpha, y, b, kernel, C, converged, worst):
    keep = alpha > 0
    return SvmModel(
        X[keep].copy(),
        alpha[keep].copy(),
        y[keep].copy(),
        float(b),
        kernel,
        float(C),
        bool(converged),
        float(worst),
    )


def decision_value(model: SvmModel, x) -> float:
    """f(x) = b + sum_i alpha_i y_i K(x_i, x)."""
    return float(decision_values(model, np.atleast_2d(np.asarray(x, dtype=float)))[0])


def decision_values(model: SvmModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(model.coefficients) == 0:
        return np.full(X.shape[0], model.bias)
    Kx = kernel_matrix(model.kernel, X, model.support_vectors)
    return Kx @ (model.coefficients * model.labels) + model.bias


def classify(model: SvmModel, x) -> str:
    """UP for a positive decision value, DOWN otherwise (zero counts as DOWN)."""
    return UP if decision_value(model, x) > 0 else DOWN


def hard_distribution(model: SvmModel, x) -> np.ndarray:
    """One-hot distribution over (UP, DOWN) from the hard classification."""
    onehot = np.zeros(len(CLASS_LABELS))
    onehot[CLASS_LABELS.index(classify(model, x))] = 1.0
    return onehot


def save_model(model: SvmModel, path) -> None:
    """Serialize as flat ``key = value`` text, round-trip safe to 17 digits."""
    lines = [
        "model = svm",
        f"kernel = {model.kernel.kind}",
    ]
    if model.kernel.degree is not None:
        lines.append(f"degree = {model.kernel.degree}")
    if model.kernel.delta_sq is not None:
        lines.append(f"delta_sq = {model.kernel.delta_sq:.17g}")
    lines += [
        f"C = {model.C:.17g}",
        f"bias = {model.bias:.17g}",
        f"converged = {str(model.converged).lower()}",
        f"kkt_violation = {model.kkt_violation:.17g}",
        f"n_support = {len(model.coefficients)}",
    ]
    for i, (a, y_, v) in enumerate(
        zip(model.coefficients, model.labels, model.support_vectors)
    ):
        lines.append(f"sv.{i}.alpha = {a:.17g}")
        lines.append(f"sv.{i}.label = {int(y_)}")
        lines.append(f"sv.{i}.x = {','.join(format(t, '.17g') for t in v)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> SvmModel:
    """Inverse of :func:`save_model`."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition(" = ")
            entries[key] = value
    if entries.get("model") != "svm":
        raise DataFormatError(f"{path}: not an SVM model file")
    kind = entries["kernel"]
    kernel = KernelSpec(
        kind,
        degree=int(entries["degree"]) if kind == POLY else None,
        delta_sq=float(entries["delta_sq"]) if kind == RBF else None,
    )
    m = int(entries["n_support"])
    coefficients = np.array([float(entries[f"sv.{i}.alpha"]) for i in range(m)])
    labels = np.array([float(entries[f"sv.{i}.label"]) for i in range(m)])
    vectors = (
        np.array(
            [[float(t) for t in entries[f"sv.{i}.x"].split(",")] for i in range(m)]
        )
        if m
        else np.zeros((0, 0))
    )
    return SvmModel(
        vectors,
        coefficients,
        labels,
        float(entries["bias"]),
        kernel,
        float(entries["C"]),
        entries.get("converged", "true") == "true",
        float(entries.get("kkt_violation", "nan")),
    )
