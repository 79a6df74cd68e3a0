"""Exponent estimation from survival curves.

The survival fraction of the non-intersection event decays like
p(T) ~ T**(-xi/2) in the walk length T, so the exponent is read off a
weighted log-log regression: a fitted slope s gives xi_hat = -2 s.
Weights are the survivor counts (inverse variance up to constants) and
the quoted standard error is propagated from the binomial variance of
each survival fraction.

``fit_corrected`` adds a 1/log T term to the regression, absorbing the
leading finite-size distortion of short walks:

    -log p(T) = (xi/2) log T + c + b / log T

The correction model is a modeling choice, not a theorem; downstream
reports must label corrected values as such.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .engine import SurvivalCurve
from .errors import EmptyBracketError, FitError, InsufficientDataError, ValidationError

MIN_SURVIVORS = 30  # per-horizon floor below which p_hat is not trusted
DEFAULT_T_MIN = 64  # horizons below this are dominated by lattice transients


def transient_window(multiplier) -> tuple[int, None]:
    """Scale-aware fit window for a given multiplier set.

    Multiplying the second walk by a stretches its diffusive scale by |a|,
    so the lattice transient lasts about |a|^2 times longer than for
    unit-modulus sets; the window start grows accordingly.
    """
    scale = 1
    if multiplier.is_finite():
        scale = max(p.norm2() for p in multiplier.points)
    return (DEFAULT_T_MIN * max(1, scale), None)


@dataclass(frozen=True)
class ExponentEstimate:
    xi_hat: float
    stderr: float
    window: tuple[int, int]
    corrected: bool = False
    correction_coeff: float | None = None
    horizons_used: tuple[int, ...] = ()
    residuals: tuple[float, ...] = ()

    def __post_init__(self):
        if not math.isfinite(self.xi_hat):
            raise FitError("fitted exponent is not finite")
        if self.stderr < 0:
            raise FitError("standard error must be nonnegative")
        if self.window[0] >= self.window[1]:
            raise FitError("fit window must satisfy T_min < T_max")


@dataclass(frozen=True)
class SubadditivityBracket:
    lower: float
    upper: float
    c_minus: float
    c_plus: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise EmptyBracketError(self.lower, self.upper)


def _usable_rows(curve: SurvivalCurve, window, min_horizons: int):
    t_min, t_max = window if window is not None else (DEFAULT_T_MIN, None)
    if t_max is None:
        t_max = curve.horizons[-1]
    rows = [(T, s) for T, s in zip(curve.horizons, curve.survivors)
            if t_min <= T <= t_max]
    if any(s == 0 for _, s in rows):
        warnings.warn("window contains zero-survivor horizons; shrinking it",
                      RuntimeWarning, stacklevel=3)
    # survivors are non-increasing, so the under-populated rows form a suffix
    while rows and rows[-1][1] < MIN_SURVIVORS:
        rows.pop()
    if len(rows) < min_horizons:
        raise InsufficientDataError(
            f"need >= {min_horizons} horizons with >= {MIN_SURVIVORS} survivors "
            f"inside the window, found {len(rows)}"
        )
    return rows


def _wls(x: np.ndarray, y: np.ndarray, w: np.ndarray, var_y: np.ndarray):
    """Weighted LS fit y ~ a + b x; returns (a, b, var_b) with var_b propagated
    from the supplied per-point variances (not from residual scatter)."""
    sw = w.sum()
    xbar = (w * x).sum() / sw
    ybar = (w * y).sum() / sw
    sxx = (w * (x - xbar) ** 2).sum()
    if sxx == 0:
        raise FitError("degenerate fit window: all horizons coincide")
    b = (w * (x - xbar) * (y - ybar)).sum() / sxx
    a = ybar - b * xbar
    coeff = w * (x - xbar) / sxx
    var_b = (coeff ** 2 * var_y).sum()
    return a, b, var_b


def fit_exponent(curve: SurvivalCurve, window: tuple[int, int] | None = None
                 ) -> ExponentEstimate:
    """Plain log-log fit of the survival curve over the given horizon window."""
    rows = _usable_rows(curve, window, min_horizons=3)
    T = np.array([r[0] for r in rows], dtype=float)
    s = np.array([r[1] for r in rows], dtype=float)
    n = float(curve.total_samples)
    p = s / n
    x = np.log(T)
    y = np.log(p)
    w = s.copy()
    var_y = (1.0 - p) / s  # delta method: var(log p_hat) = (1-p)/(n p)
    a, b, var_b = _wls(x, y, w, var_y)
    resid = y - (a + b * x)
    return ExponentEstimate(
        xi_hat=-2.0 * b,
        stderr=2.0 * math.sqrt(var_b),
        window=(int(T[0]), int(T[-1])),
        corrected=False,
        horizons_used=tuple(int(t) for t in T),
        residuals=tuple(float(r) for r in resid),
    )


def fit_corrected(curve: SurvivalCurve, window: tuple[int, int] | None = None,
                  cond_limit: float = 1e8) -> ExponentEstimate:
    """Fit -log p = (xi/2) log T + c + b / log T and report the corrected xi."""
    rows = _usable_rows(curve, window, min_horizons=5)
    T = np.array([r[0] for r in rows], dtype=float)
    s = np.array([r[1] for r in rows], dtype=float)
    n = float(curve.total_samples)
    p = s / n
    x = np.log(T)
    y = -np.log(p)
    w = s.copy()
    var_y = (1.0 - p) / s
    X = np.column_stack([x, np.ones_like(x), 1.0 / x])
    sqw = np.sqrt(w)
    Xw = X * sqw[:, None]
    cond = np.linalg.cond(Xw)
    if cond > cond_limit:
        raise FitError(
            f"corrected fit is ill-conditioned (condition number {cond:.3g}); "
            "widen the horizon window"
        )
    beta, *_ = np.linalg.lstsq(Xw, y * sqw, rcond=None)
    a_inv = np.linalg.inv(Xw.T @ Xw)
    # sandwich covariance with per-point binomial variances
    mid = (X * (w ** 2 * var_y)[:, None]).T @ X
    cov = a_inv @ mid @ a_inv
    resid = y - X @ beta
    return ExponentEstimate(
        xi_hat=2.0 * float(beta[0]),
        stderr=2.0 * math.sqrt(max(0.0, float(cov[0, 0]))),
        window=(int(T[0]), int(T[-1])),
        corrected=True,
        correction_coeff=float(beta[2]),
        horizons_used=tuple(int(t) for t in T),
        residuals=tuple(float(r) for r in resid),
    )


def subadditive_bracket(q: "np.ndarray | list[float]", c_minus: float,
                        c_plus: float) -> SubadditivityBracket:
    """Rigorous two-sided exponent bounds from survival values q_n = f(e^n).

    For an f pinched by c_plus**-1 t**-xi <= f(t) <= c_minus**-1 t**-xi,
    each n yields xi >= -log(c_plus q_n)/n and xi <= -log(c_minus q_n)/n;
    the bracket is the intersection over n.  An empty intersection raises
    and is evidence that the supplied constants do not hold for the data.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or len(q) == 0:
        raise ValidationError("q must be a nonempty 1-d sequence")
    if (q <= 0).any():
        raise ValidationError("survival values must be positive")
    if c_minus <= 0 or c_plus <= 0:
        raise ValidationError("multiplicativity constants must be positive")
    ns = np.arange(1, len(q) + 1, dtype=float)
    lowers = -np.log(c_plus * q) / ns
    uppers = -np.log(c_minus * q) / ns
    return SubadditivityBracket(
        lower=float(lowers.max()),
        upper=float(uppers.min()),
        c_minus=c_minus,
        c_plus=c_plus,
    )


def fit_report(est: ExponentEstimate) -> dict:
    """JSON-ready summary of a fit, residuals included for plotting."""
    return {
        "xi_hat": est.xi_hat,
        "stderr": est.stderr,
        "window": list(est.window),
        "corrected": est.corrected,
        "correction_coeff": est.correction_coeff,
        "horizons": list(est.horizons_used),
        "residuals": list(est.residuals),
        "status": "simulation",
    }
