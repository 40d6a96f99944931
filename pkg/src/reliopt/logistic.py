"""Logistic reliability model and its Newton-Raphson maximum-likelihood fit.

The reliability of a bank with ratio vector x is the fitted probability of
the healthy label: ``sigmoid(b0 + b1*x1 + ... + bn*xn)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import (
    DimensionMismatchError,
    NonFiniteIterateError,
    SingleClassDatasetError,
    SingularHessianError,
)

if TYPE_CHECKING:
    from .data import Dataset

DEFAULT_MAX_ITER = 100
DEFAULT_GRAD_TOL = 1e-8
FALLBACK_RIDGE = 1e-8


def sigmoid(t):
    """Numerically stable logistic function, elementwise.

    Both branches keep the exponent non-positive, so there is no overflow
    for any finite argument; scalars in, scalar out.
    """
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    e = np.exp(arr[~pos])
    out[~pos] = e / (1.0 + e)
    return float(out[0]) if scalar else out


def log_sigmoid(t):
    """log(sigmoid(t)) without underflowing the probability first."""
    arr = np.asarray(t, dtype=float)
    return np.minimum(arr, 0.0) - np.log1p(np.exp(-np.abs(arr)))


def _sigmoid_scalar(t: float) -> float:
    # fast path for the optimizer's per-point objective calls
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Coefficient vector (intercept first) plus the feature names it scores."""

    beta: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self) -> None:
        beta = np.ascontiguousarray(self.beta, dtype=float)
        names = tuple(str(name) for name in self.feature_names)
        if beta.ndim != 1 or beta.size != len(names) + 1:
            raise DimensionMismatchError(
                f"beta must have {len(names) + 1} entries (intercept first), got shape {beta.shape}"
            )
        if not np.isfinite(beta).all():
            raise DimensionMismatchError("beta must be finite")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


@dataclass(frozen=True)
class FitReport:
    converged: bool
    iterations: int
    final_log_likelihood: float
    max_abs_gradient: float
    ridge_used: float


def _check_features(model: LogisticModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_features,):
        raise DimensionMismatchError(
            f"expected {model.n_features} features, got shape {x.shape}"
        )
    return x


def reliability(model: LogisticModel, x) -> float:
    """Probability of the healthy label for ratio vector x, in (0, 1)."""
    x = _check_features(model, x)
    return _sigmoid_scalar(float(model.beta[0] + model.beta[1:] @ x))


def _scores(model: LogisticModel, dataset: Dataset) -> np.ndarray:
    if dataset.n_features != model.n_features:
        raise DimensionMismatchError(
            f"model has {model.n_features} features, dataset has {dataset.n_features}"
        )
    return model.beta[0] + dataset.features @ model.beta[1:]


def log_likelihood(model: LogisticModel, dataset: Dataset) -> float:
    """Bernoulli log-likelihood of the dataset under the model.

    Row contributions are combined with ``math.fsum``, so the result is the
    correctly rounded sum: duplicating every row exactly doubles it.
    """
    t = _scores(model, dataset)
    per_row = np.where(dataset.labels == 1, log_sigmoid(t), log_sigmoid(-t))
    return math.fsum(per_row)


def _residuals(labels: np.ndarray, t: np.ndarray) -> np.ndarray:
    # y - p without the cancellation of 1 - sigmoid(t) at saturated scores
    return np.where(labels == 1, sigmoid(-t), -sigmoid(t))


def gradient(model: LogisticModel, dataset: Dataset) -> np.ndarray:
    """Gradient of the log-likelihood in beta: residuals against the
    intercept-augmented feature matrix."""
    residual = _residuals(dataset.labels, _scores(model, dataset))
    return np.concatenate(([residual.sum()], dataset.features.T @ residual))


def _bernoulli_weights(t: np.ndarray) -> np.ndarray:
    # p*(1-p) evaluated as sigmoid(t)*sigmoid(-t): stays positive until
    # sigmoid(-|t|) truly underflows, instead of hitting zero near |t|~37
    return sigmoid(t) * sigmoid(-t)


def hessian(model: LogisticModel, dataset: Dataset) -> np.ndarray:
    """Hessian of the log-likelihood: symmetric negative semi-definite."""
    w = _bernoulli_weights(_scores(model, dataset))
    augmented = np.hstack([np.ones((dataset.n_rows, 1)), dataset.features])
    h = -(augmented.T * w) @ augmented
    return (h + h.T) / 2.0


def fit(
    dataset: Dataset,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    grad_tol: float = DEFAULT_GRAD_TOL,
    ridge: float = 0.0,
    ridge_fallback: bool = True,
) -> tuple[LogisticModel, FitReport]:
    """Maximum-likelihood fit by Newton-Raphson, starting from beta = 0.

    Each step solves ``(-H + ridge*I) delta = grad - ridge*beta`` through a
    Cholesky factorization. When the factorization fails with ridge = 0 and
    the fallback is enabled, a ridge of ``FALLBACK_RIDGE`` is switched on for
    the remaining iterations and recorded in the report; with the fallback
    disabled the failure raises SingularHessianError.

    On perfectly separated data the likelihood has no finite maximizer: the
    gradient shrinks while the coefficients diverge. With no ridge in play,
    a small gradient therefore only counts as convergence when the current
    coefficients do not strictly separate the two classes (a strict separator
    proves the optimum sits at infinity); otherwise the fit runs out of
    iterations and reports ``converged=False`` with finite coefficients.
    """
    labels = dataset.labels
    if labels.min() == labels.max():
        raise SingleClassDatasetError(
            "single-class dataset: need both healthy and bankrupt rows"
        )
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if grad_tol <= 0 or ridge < 0:
        raise ValueError("grad_tol must be positive and ridge non-negative")

    m, n = dataset.features.shape
    augmented = np.hstack([np.ones((m, 1)), dataset.features])
    beta = np.zeros(n + 1)
    identity = np.eye(n + 1)
    ridge_used = float(ridge)
    iterations = 0

    def penalized_gradient(b: np.ndarray) -> np.ndarray:
        g = augmented.T @ _residuals(labels, augmented @ b)
        return g - ridge_used * b if ridge_used else g

    signed = 2.0 * labels - 1.0

    def at_optimum(b: np.ndarray, grad: np.ndarray) -> bool:
        if np.abs(grad).max() > grad_tol:
            return False
        if ridge_used:
            return True
        # an unpenalized "solution" that strictly separates the classes is
        # the infinite-MLE artifact, not a maximizer
        return bool((signed * (augmented @ b) <= 0).any())

    for _ in range(max_iter):
        grad = penalized_gradient(beta)
        if at_optimum(beta, grad):
            break
        w = _bernoulli_weights(augmented @ beta)
        curvature = (augmented.T * w) @ augmented
        if ridge_used:
            curvature = curvature + ridge_used * identity
        try:
            factor = cho_factor(curvature, lower=True)
        except (LinAlgError, ValueError):
            if not ridge_fallback or ridge_used >= FALLBACK_RIDGE:
                raise SingularHessianError(
                    "curvature matrix is singular; enable the ridge fallback or raise ridge"
                ) from None
            ridge_used = FALLBACK_RIDGE
            grad = penalized_gradient(beta)
            try:
                factor = cho_factor(curvature + ridge_used * identity, lower=True)
            except (LinAlgError, ValueError):
                raise SingularHessianError(
                    "curvature matrix is singular even with the fallback ridge"
                ) from None
        beta = beta + cho_solve(factor, grad)
        if not np.isfinite(beta).all():
            raise NonFiniteIterateError("Newton iterate overflowed")
        iterations += 1

    model = LogisticModel(beta=beta, feature_names=dataset.feature_names)
    final_grad = penalized_gradient(beta)
    max_abs_gradient = float(np.abs(final_grad).max())
    report = FitReport(
        converged=at_optimum(beta, final_grad),
        iterations=iterations,
        final_log_likelihood=log_likelihood(model, dataset),
        max_abs_gradient=max_abs_gradient,
        ridge_used=ridge_used,
    )
    return model, report


def model_to_json(model: LogisticModel, report: FitReport | None = None) -> str:
    """Serialize to JSON; coefficient floats keep full round-trip precision."""
    payload = {
        "feature_names": list(model.feature_names),
        "beta": [float(b) for b in model.beta],
        "fit": asdict(report) if report is not None else None,
    }
    return json.dumps(payload, indent=2) + "\n"


def model_from_json(text: str) -> tuple[LogisticModel, FitReport | None]:
    payload = json.loads(text)
    model = LogisticModel(
        beta=np.asarray(payload["beta"], dtype=float),
        feature_names=tuple(payload["feature_names"]),
    )
    report = FitReport(**payload["fit"]) if payload.get("fit") else None
    return model, report


def save_model(model: LogisticModel, path: str | Path, report: FitReport | None = None) -> None:
    Path(path).write_text(model_to_json(model, report), encoding="utf-8")


def load_model(path: str | Path) -> tuple[LogisticModel, FitReport | None]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return model_from_json(path.read_text(encoding="utf-8"))
