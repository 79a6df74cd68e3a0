"""Square-lattice random walks with exact Gaussian-integer arithmetic.

Walks take steps in {a, ia, -a, -ia} for a complex step unit a (default
1), so every point is a Gaussian integer and all geometric predicates
(equality, squared radius) are computed on Python/numpy integers with no
floating-point error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .rng import Stream


class LatticePoint(NamedTuple):
    """A Gaussian integer re + im*i."""

    re: int
    im: int

    def __add__(self, other):
        return LatticePoint(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return LatticePoint(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        """Exact Gaussian-integer product."""
        return LatticePoint(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return LatticePoint(-self.re, -self.im)

    def conjugate(self) -> "LatticePoint":
        return LatticePoint(self.re, -self.im)

    def norm2(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ORIGIN = LatticePoint(0, 0)
UNIT = LatticePoint(1, 0)

# increments i^d * step for d = 0..3, expressed on (re, im) of the step
_DIR_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_DIR_IM = np.array([0, 1, 0, -1], dtype=np.int64)


@dataclass(frozen=True)
class HittingRecord:
    """First index at which the walk reaches radius ``radius`` (None if never)."""

    radius: float
    index: int | None


@dataclass(frozen=True)
class LatticePath:
    """An append-only walk; ``xs[k], ys[k]`` is the k-th visited point."""

    xs: np.ndarray
    ys: np.ndarray
    origin: LatticePoint = ORIGIN
    step: LatticePoint = UNIT
    label: str = ""

    def __post_init__(self):
        if self.step == ORIGIN:
            raise ValidationError("step unit must be nonzero")
        if len(self.xs) != len(self.ys) or len(self.xs) == 0:
            raise ValidationError("path must contain at least its origin")
        if self.xs[0] != self.origin.re or self.ys[0] != self.origin.im:
            raise ValidationError("path must start at its origin")
        if len(self.xs) > 1:
            dx = np.diff(self.xs)
            dy = np.diff(self.ys)
            ok = np.zeros(len(dx), dtype=bool)
            for d in range(4):
                sre = _DIR_RE[d] * self.step.re - _DIR_IM[d] * self.step.im
                sim = _DIR_RE[d] * self.step.im + _DIR_IM[d] * self.step.re
                ok |= (dx == sre) & (dy == sim)
            if not ok.all():
                raise ValidationError("consecutive points must differ by a unit step")

    @classmethod
    def at(cls, origin: LatticePoint = ORIGIN, step: LatticePoint = UNIT,
           label: str = "") -> "LatticePath":
        return cls(
            xs=np.array([origin.re], dtype=np.int64),
            ys=np.array([origin.im], dtype=np.int64),
            origin=origin,
            step=step,
            label=label,
        )

    def __len__(self):
        return len(self.xs)

    @property
    def n_steps(self) -> int:
        return len(self.xs) - 1

    def point(self, i: int) -> LatticePoint:
        return LatticePoint(int(self.xs[i]), int(self.ys[i]))

    def points(self) -> list[LatticePoint]:
        return [LatticePoint(int(x), int(y)) for x, y in zip(self.xs, self.ys)]


def extend(path: LatticePath, stream: Stream, n: int) -> LatticePath:
    """Append ``n`` uniform steps drawn from ``stream``.

    Step t of the walk consumes draw t of the stream, so the result only
    depends on (seed, stream id, prior length): extending by 10 twice
    equals extending by 20 once.
    """
    if n < 0:
        raise ValidationError("cannot extend by a negative step count")
    if n == 0:
        return path
    dirs = stream.directions(path.n_steps, n)
    sre = _DIR_RE[dirs] * path.step.re - _DIR_IM[dirs] * path.step.im
    sim = _DIR_RE[dirs] * path.step.im + _DIR_IM[dirs] * path.step.re
    xs = np.concatenate([path.xs, path.xs[-1] + np.cumsum(sre)])
    ys = np.concatenate([path.ys, path.ys[-1] + np.cumsum(sim)])
    return LatticePath(xs=xs, ys=ys, origin=path.origin, step=path.step,
                       label=path.label)


def random_walk(n: int, seed: int, stream: int = 0,
                origin: LatticePoint = ORIGIN,
                step: LatticePoint = UNIT) -> LatticePath:
    """A fresh n-step walk on stream (seed, stream)."""
    label = f"srw(seed={seed},stream={stream},steps={n})"
    return extend(LatticePath.at(origin, step, label=label), Stream(seed, stream), n)


def hitting_index(path: LatticePath, radius: float) -> HittingRecord:
    """Minimal index with |point - origin| >= radius, by squared-radius comparison.

    Comparisons are exact: integer squared norms are compared against
    radius**2 (coordinates stay far below 2**26, so the float product is
    exact wherever it matters).
    """
    if radius < 0:
        raise ValidationError("radius must be nonnegative")
    if radius == 0:
        return HittingRecord(radius, 0)
    dx = path.xs - path.origin.re
    dy = path.ys - path.origin.im
    hit = dx * dx + dy * dy >= radius * radius
    if not hit.any():
        return HittingRecord(radius, None)
    return HittingRecord(radius, int(np.argmax(hit)))
