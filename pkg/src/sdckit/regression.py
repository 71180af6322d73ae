"""Model fitting: least squares plus binary-response maximum likelihood.

Everything here works on an explicit design matrix.  The fitting routines
are written out directly (QR for least squares, Newton iterations for the
likelihood models) so that their numerical behaviour is fully pinned down
by this module rather than by a modelling library's release notes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_ndtr, ndtr

from .config import RuleConfig
from .errors import (
    RankDeficiencyError,
    RegressionError,
    SeparationError,
    TypeMismatchError,
)

NEWTON_MAX_ITER = 100
SCORE_TOL = 1e-8
#: Coefficient norm beyond which a diverging fit is declared separated.
SEPARATION_NORM = 1e6

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Numeric design: response vector, predictor matrix, column names."""

    response: np.ndarray  # shape (n,)
    predictors: np.ndarray  # shape (n, k)
    column_names: tuple
    has_intercept: bool

    def __post_init__(self):
        y = np.asarray(self.response, dtype=float)
        X = np.asarray(self.predictors, dtype=float)
        if X.ndim != 2:
            raise RegressionError("predictor matrix must be two-dimensional")
        n, k = X.shape
        if y.shape != (n,):
            raise RegressionError(
                f"response has length {y.shape}, predictors have {n} rows"
            )
        if n == 0:
            raise RegressionError("design matrix has no rows")
        if k == 0:
            raise RegressionError("design matrix has no columns")
        if len(self.column_names) != k:
            raise RegressionError("one name per predictor column is required")
        if not np.all(np.isfinite(y)) or not np.all(np.isfinite(X)):
            raise RegressionError("design matrix contains non-finite values")
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "predictors", X)
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n_obs(self) -> int:
        return self.predictors.shape[0]

    @property
    def n_params(self) -> int:
        return self.predictors.shape[1]


@dataclass(frozen=True)
class RegressionResult:
    """Full estimates plus the safety verdict.

    Estimates are always complete, safe or not — the session layer decides
    what the researcher sees, and the checker-facing bundle needs the
    evidence either way.
    """

    model_kind: str  # "ols" | "logit" | "probit"
    names: tuple
    coefficients: tuple
    std_errors: tuple
    statistics: tuple  # t values (ols) or z values (logit/probit)
    residual_dof: int
    fit: float  # R-squared or pseudo R-squared
    converged: bool
    safe: bool  # residual-dof verdict under the fitting config


def check_dof(residual_dof: int, config: RuleConfig) -> bool:
    """Safe iff the fit retains at least the configured residual dof."""
    return residual_dof >= config.safe_dof_threshold


def _validate_design(dm: DesignMatrix) -> None:
    n, k = dm.n_obs, dm.n_params
    if n <= k:
        raise RegressionError(
            f"{n} observations cannot identify {k} parameters"
        )
    X = dm.predictors
    rank = 0
    for j in range(k):
        new_rank = np.linalg.matrix_rank(X[:, : j + 1])
        if new_rank == rank:
            raise RankDeficiencyError(dm.column_names[j])
        rank = new_rank


def _as_floats(arr) -> tuple:
    return tuple(float(v) for v in arr)


def fit_ols(dm: DesignMatrix, config: RuleConfig) -> RegressionResult:
    """Least squares through the thin QR factorisation."""
    _validate_design(dm)
    y, X = dm.response, dm.predictors
    n, k = dm.n_obs, dm.n_params

    Q, R = np.linalg.qr(X)
    coef = np.linalg.solve(R, Q.T @ y)
    residuals = y - X @ coef
    rss = float(residuals @ residuals)
    dof = n - k
    s2 = rss / dof

    r_inv = np.linalg.solve(R, np.eye(k))
    cov = s2 * (r_inv @ r_inv.T)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvals = np.where(se > 0.0, coef / se, np.inf * np.sign(coef))

    if dm.has_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    # When the baseline already has zero residual variance the usual ratio
    # is 0/0; report 0 rather than a non-number.
    fit = 1.0 - rss / tss if tss > 0.0 else 0.0

    return RegressionResult(
        model_kind="ols",
        names=dm.column_names,
        coefficients=_as_floats(coef),
        std_errors=_as_floats(se),
        statistics=_as_floats(tvals),
        residual_dof=dof,
        fit=float(fit),
        converged=True,
        safe=check_dof(dof, config),
    )


def _require_binary(y: np.ndarray, model: str) -> None:
    if not np.all((y == 0.0) | (y == 1.0)):
        raise TypeMismatchError(
            f"response for {model} must contain only 0 and 1"
        )


def _binary_null_loglike(y: np.ndarray) -> float:
    """Log likelihood of the intercept-only binary model (closed form)."""
    n = y.shape[0]
    p_bar = float(y.mean())
    if p_bar in (0.0, 1.0):
        return 0.0
    return n * (p_bar * math.log(p_bar) + (1.0 - p_bar) * math.log(1.0 - p_bar))


# --- logit -----------------------------------------------------------------

def logit_loglike(beta, X, y) -> float:
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def logit_score(beta, X, y) -> np.ndarray:
    p = expit(X @ beta)
    return X.T @ (y - p)


def _logit_info(beta, X):
    p = expit(X @ beta)
    w = p * (1.0 - p)
    return (X * w[:, None]).T @ X, p


# --- probit ----------------------------------------------------------------

def norm_cdf(t):
    return ndtr(t)


def norm_pdf(t):
    return np.exp(-0.5 * np.asarray(t) ** 2 - _LOG_SQRT_2PI)


def _mills(t):
    """phi(t) / Phi(t), computed in log space so deep tails stay finite."""
    t = np.asarray(t, dtype=float)
    return np.exp((-0.5 * t**2 - _LOG_SQRT_2PI) - log_ndtr(t))


def probit_loglike(beta, X, y) -> float:
    eta = X @ beta
    return float(np.sum(y * log_ndtr(eta) + (1.0 - y) * log_ndtr(-eta)))


def probit_score(beta, X, y) -> np.ndarray:
    eta = X @ beta
    lam = y * _mills(eta) - (1.0 - y) * _mills(-eta)
    return X.T @ lam


def _probit_info(beta, X, y):
    eta = X @ beta
    lam = y * _mills(eta) - (1.0 - y) * _mills(-eta)
    w = lam * (lam + eta)
    p = ndtr(eta)
    return (X * w[:, None]).T @ X, p


def _fit_binary(dm: DesignMatrix, config: RuleConfig, model: str) -> RegressionResult:
    _validate_design(dm)
    y, X = dm.response, dm.predictors
    _require_binary(y, model)
    n, k = dm.n_obs, dm.n_params

    if model == "logit":
        loglike, score_fn, info_fn = logit_loglike, logit_score, _logit_info
    else:
        loglike, score_fn = probit_loglike, probit_score
        info_fn = lambda beta, X_: _probit_info(beta, X_, y)  # noqa: E731

    beta = np.zeros(k)
    ll = loglike(beta, X, y)
    converged = False
    info = None
    for _ in range(NEWTON_MAX_ITER):
        score = score_fn(beta, X, y)
        if float(np.max(np.abs(score))) < SCORE_TOL:
            converged = True
            break
        info, p = info_fn(beta, X)
        try:
            step = np.linalg.solve(info, score)
        except np.linalg.LinAlgError:
            if np.all(np.abs(y - p) < 1e-8):
                raise SeparationError(
                    f"{model} fit is perfectly separated: fitted "
                    "probabilities reached 0/1 and the information "
                    "matrix collapsed"
                ) from None
            raise RegressionError(
                f"{model} information matrix is singular"
            ) from None
        # Step halving keeps the likelihood from going backwards.  The
        # slack matters: near the optimum the change in log likelihood
        # drops below rounding noise, and without it the full Newton
        # step would be rejected forever and the iteration would stall.
        slack = 1e-10 * (1.0 + abs(ll))
        new_beta = beta + step
        new_ll = loglike(new_beta, X, y)
        halvings = 0
        while new_ll < ll - slack and halvings < 30:
            step = step / 2.0
            new_beta = beta + step
            new_ll = loglike(new_beta, X, y)
            halvings += 1
        beta, ll = new_beta, new_ll
        if float(np.linalg.norm(beta)) > SEPARATION_NORM:
            raise SeparationError(
                f"{model} coefficients are diverging; the data are "
                "perfectly (or quasi-) separated"
            )

    info, _ = info_fn(beta, X)
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        raise RegressionError(
            f"{model} information matrix is singular at the solution"
        ) from None
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        zvals = np.where(se > 0.0, beta / se, np.inf * np.sign(beta))

    ll_null = _binary_null_loglike(y)
    fit = 1.0 - ll / ll_null if ll_null != 0.0 else 0.0

    return RegressionResult(
        model_kind=model,
        names=dm.column_names,
        coefficients=_as_floats(beta),
        std_errors=_as_floats(se),
        statistics=_as_floats(zvals),
        residual_dof=n - k,
        fit=float(fit),
        converged=converged,
        safe=check_dof(n - k, config),
    )


def fit_logit(dm: DesignMatrix, config: RuleConfig) -> RegressionResult:
    """Binary logistic regression by Newton iteration."""
    return _fit_binary(dm, config, "logit")


def fit_probit(dm: DesignMatrix, config: RuleConfig) -> RegressionResult:
    """Binary probit regression by Newton iteration."""
    return _fit_binary(dm, config, "probit")


MODEL_FITTERS = {
    "ols": fit_ols,
    "logit": fit_logit,
    "probit": fit_probit,
}


def fit_model(model: str, dm: DesignMatrix, config: RuleConfig) -> RegressionResult:
    try:
        fitter = MODEL_FITTERS[model]
    except KeyError:
        raise RegressionError(f"unknown model kind {model!r}") from None
    return fitter(dm, config)
