"""Closed-form exponent values, conjectured formulas and analytic bounds.

Every function is pure arithmetic on the printed formulas; the module also
tags each quantity with its epistemic status (theorem / conjecture) so
reports never silently mix proved and conjectured numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

THEOREM = "theorem"
CONJECTURE = "conjecture"
SIMULATION = "simulation"

_LOG2 = math.log(2.0)
_TWOPI = 2.0 * math.pi

# below this arc angle, pivoting points provably exist (positive dimension)
PIVOT_ANGLE_THRESHOLD = _LOG2 ** 2 / _TWOPI


def wedge_exponent(alpha: float) -> float:
    """Exact exponent 4*pi / (2*pi - alpha) of a wedge of angle alpha."""
    if not 0.0 <= alpha < _TWOPI:
        raise ValidationError("wedge angle must lie in [0, 2*pi); the exponent "
                              "diverges at 2*pi")
    return 4.0 * math.pi / (_TWOPI - alpha)


def nfold_exact(n: int) -> float:
    """Exact exponent 5n/4 of the n-th roots-of-unity orbit of a point."""
    if n < 1:
        raise ValidationError("n must be a positive integer")
    return 5.0 * n / 4.0


def weak_pivot_conjecture(theta: float) -> float:
    """Conjectured exponent (5*pi/2) / (2*pi - theta) of {1, e^(i theta)}.

    Valid for theta in [0, pi]; the value is a conjecture and must always
    be labeled as such in output.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValidationError("theta must lie in [0, pi]")
    return (2.5 * math.pi) / (_TWOPI - theta)


def pivot_upper_bound(alpha: float) -> float:
    """Proved upper bound on the arc exponent: the wedge value damped by
    the branching factor 1 - (log 2)^2 / (4 pi^2)."""
    return wedge_exponent(alpha) * (1.0 - _LOG2 ** 2 / (4.0 * math.pi ** 2))


def strip_family_bound(beta: float, gamma: float) -> float:
    """Upper bound from the family of piecewise-linear strips of width beta
    and corner spacing gamma: pi*beta/(2 gamma^2) - log(2)/gamma + 2*pi/beta."""
    if beta <= 0 or gamma <= 0:
        raise ValidationError("beta and gamma must be positive")
    return (math.pi * beta / 2.0) / gamma ** 2 - _LOG2 / gamma + _TWOPI / beta


def optimize_gamma(beta: float) -> float:
    """Argmin of strip_family_bound in gamma: pi*beta/log 2."""
    if beta <= 0:
        raise ValidationError("beta must be positive")
    return math.pi * beta / _LOG2


@dataclass(frozen=True)
class StripSpec:
    """A Lipschitz strip in logarithmic coordinates."""

    beta: float
    M: float
    gamma: float
    r: float

    def __post_init__(self):
        if self.beta <= 0 or self.gamma <= 0 or self.r <= 0 or self.M < 0:
            raise ValidationError("strip requires beta, gamma, r > 0 and M >= 0")


def strip_crossing_lower_bound(spec: StripSpec) -> float:
    """Lower bound (1/pi) exp(-pi r (1 + M^2) / beta) on the probability that
    a walk crosses the strip lengthwise, clamped to [0, 1]."""
    val = math.exp(-math.pi * spec.r * (1.0 + spec.M ** 2) / spec.beta) / math.pi
    return min(1.0, max(0.0, val))


@dataclass(frozen=True)
class SampledStrip:
    """Strip between two sampled boundary functions f1 < f2 on a grid."""

    grid: np.ndarray
    f1: np.ndarray
    f2: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        f1 = np.asarray(self.f1, dtype=float)
        f2 = np.asarray(self.f2, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "f2", f2)
        if grid.ndim != 1 or len(grid) < 2:
            raise ValidationError("grid needs at least two abscissae")
        if len(f1) != len(grid) or len(f2) != len(grid):
            raise ValidationError("boundary samples must align with the grid")
        if (np.diff(grid) <= 0).any():
            raise ValidationError("grid must be strictly increasing")
        if (f2 <= f1).any():
            raise ValidationError("strip width must be positive everywhere")


def extremal_distance_bounds(strip: SampledStrip, lipschitz_m: float | None = None
                             ) -> tuple[float, float | None]:
    """Bounds on the extremal distance across a strip.

    The lower bound is the trapezoid quadrature of 1/(f2 - f1); the upper
    bound (L/a)(1 + M^2) applies only for constant width a with a supplied
    Lipschitz constant, else None is returned for it.
    """
    width = strip.f2 - strip.f1
    lower = float(np.trapezoid(1.0 / width, strip.grid))
    upper = None
    if lipschitz_m is not None:
        a = width[0]
        if np.allclose(width, a, rtol=1e-12, atol=1e-12):
            L = float(strip.grid[-1] - strip.grid[0])
            upper = (L / float(a)) * (1.0 + lipschitz_m ** 2)
    return lower, upper


def bounds_rows(alphas) -> list[dict]:
    """Table of exact wedge exponents, pivot upper bounds and the weak-pivot
    conjecture over an alpha grid, each entry carrying its status tag."""
    rows = []
    for alpha in alphas:
        row = {
            "alpha": float(alpha),
            "wedge_exact": wedge_exponent(alpha),
            "wedge_status": THEOREM,
            "pivot_upper_bound": pivot_upper_bound(alpha),
            "pivot_upper_status": THEOREM,
        }
        if alpha <= math.pi:
            row["weak_pivot"] = weak_pivot_conjecture(alpha)
            row["weak_pivot_status"] = CONJECTURE
        else:
            row["weak_pivot"] = None
            row["weak_pivot_status"] = ""
        rows.append(row)
    return rows
