"""Incremental detection of intersections between one walk and A * (other walk).

The defining event tracks whether S1 visits any point of A * S2.  Both
walks advance in lockstep; the state keeps the set of points visited by
S1 and the set A * {points visited by S2}, and records the first step m
at which some pair (s, t) with max(s, t) = m collides.

For wedge multipliers only angles matter (the wedge covers every radius),
so occupancy is kept on a circular angle grid; a one-bin safety margin is
added to alpha/2 so that quantization can only turn a true intersection
into a reported one, never the reverse (survival counts are conservative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .lattice import LatticePoint
from .multiplier import FINITE, WEDGE, MultiplierSet

WEDGE_BINS = 1 << 16


def angle_bin(p: LatticePoint, nbins: int = WEDGE_BINS) -> int:
    """Grid cell of arg(p) on [0, 2*pi) split into nbins; p must be nonzero."""
    theta = math.atan2(p.im, p.re)
    if theta < 0:
        theta += 2 * math.pi
    b = int(theta * nbins / (2 * math.pi))
    return min(b, nbins - 1)


def wedge_bin_margin(alpha: float, nbins: int = WEDGE_BINS) -> int:
    """Collision is declared at circular bin distance <= this margin.

    Chosen so every true angular distance < alpha/2 is flagged; the
    overshoot is at most two bin widths (~2e-4 rad at the default grid).
    """
    binw = 2 * math.pi / nbins
    return int((alpha / 2) / binw) + 1


@dataclass
class CollisionState:
    """Mutable per-sample collision tracker (one instance per walk pair)."""

    multiplier: MultiplierSet
    nbins: int = WEDGE_BINS
    occupied_path1: set = field(default_factory=set)
    occupied_a_image: set = field(default_factory=set)
    first_collision_step: int | None = None
    step: int = 0
    _bins1: np.ndarray | None = None
    _bins2: np.ndarray | None = None
    _margin: int = 0

    def __post_init__(self):
        if self.multiplier.kind not in (FINITE, WEDGE):
            raise ValidationError(
                "incremental collision tracking supports finite and wedge sets"
            )
        if self.multiplier.kind == WEDGE:
            self._bins1 = np.zeros(self.nbins, dtype=bool)
            self._bins2 = np.zeros(self.nbins, dtype=bool)
            self._margin = wedge_bin_margin(self.multiplier.alpha, self.nbins)

    @property
    def collided(self) -> bool:
        return self.first_collision_step is not None

    def _mark(self, m: int):
        if self.first_collision_step is None:
            self.first_collision_step = m

    def _wedge_hit(self, other_bins: np.ndarray, b: int) -> bool:
        d = self._margin
        lo, hi = b - d, b + d
        if hi - lo + 1 >= self.nbins:
            return bool(other_bins.any())
        if lo < 0:
            return bool(other_bins[lo % self.nbins:].any() or other_bins[:hi + 1].any())
        if hi >= self.nbins:
            return bool(other_bins[lo:].any() or other_bins[:hi - self.nbins + 1].any())
        return bool(other_bins[lo:hi + 1].any())

    def advance(self, new1: LatticePoint | None, new2: LatticePoint | None
                ) -> "CollisionState":
        """Advance one lockstep step; tests before inserts so the (m, m) pair counts."""
        self.step += 1
        m = self.step
        if self.multiplier.kind == FINITE:
            if new1 is not None:
                key1 = (new1.re, new1.im)
                if key1 in self.occupied_a_image:
                    self._mark(m)
                self.occupied_path1.add(key1)
            if new2 is not None:
                for a in self.multiplier.points:
                    p = a * new2
                    key = (p.re, p.im)
                    if key in self.occupied_path1:
                        self._mark(m)
                    self.occupied_a_image.add(key)
        else:
            origin = LatticePoint(0, 0)
            if new1 is not None and new1 != origin:
                b1 = angle_bin(new1, self.nbins)
                if self._wedge_hit(self._bins2, b1):
                    self._mark(m)
                self._bins1[b1] = True
            if new2 is not None and new2 != origin:
                b2 = angle_bin(new2, self.nbins)
                if self._wedge_hit(self._bins1, b2):
                    self._mark(m)
                self._bins2[b2] = True
        return self

    def seed_initial(self, p1: LatticePoint, p2: LatticePoint):
        """Record the step-0 positions, testing the (0, 0) pair.

        A valid engine offset makes a step-0 collision impossible, but
        arbitrary walk pairs are also accepted so the tracker stays
        equivalent to the batch intersection test.
        """
        if self.multiplier.kind == FINITE:
            key1 = (p1.re, p1.im)
            self.occupied_path1.add(key1)
            for a in self.multiplier.points:
                q = a * p2
                key = (q.re, q.im)
                if key == key1:
                    self._mark(0)
                self.occupied_a_image.add(key)
        else:
            origin = LatticePoint(0, 0)
            if p1 != origin and p2 != origin:
                d = abs(angle_bin(p1, self.nbins) - angle_bin(p2, self.nbins))
                if min(d, self.nbins - d) <= self._margin:
                    self._mark(0)
            if p1 != origin:
                self._bins1[angle_bin(p1, self.nbins)] = True
            if p2 != origin:
                self._bins2[angle_bin(p2, self.nbins)] = True


def advance_and_check(state: CollisionState, new1: LatticePoint | None,
                      new2: LatticePoint | None) -> CollisionState:
    """Functional alias for :meth:`CollisionState.advance`."""
    return state.advance(new1, new2)


def track_pair(points1, points2, multiplier: MultiplierSet) -> CollisionState:
    """Run the incremental tracker over two fully materialized walks."""
    if len(points1) != len(points2):
        raise ValidationError("lockstep tracking requires equal-length walks")
    state = CollisionState(multiplier)
    state.seed_initial(points1[0], points2[0])
    for p1, p2 in zip(points1[1:], points2[1:]):
        state.advance(p1, p2)
    return state
