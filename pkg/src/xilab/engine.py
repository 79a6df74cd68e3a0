"""Massively parallel sampling of walk-pair non-intersection events.

Each sample runs two lockstep walks, S1 from 0 and S2 from (a, 0), until
S1 meets A * S2 or ``max_steps`` is reached, and records the first
collision step.  Survival counts at a ladder of dyadic horizons are
aggregated in one pass: the sample survives horizon T iff its first
collision step exceeds T.

Samples are addressed by a global sample index used as the RNG stream id,
so the aggregate counts are bit-identical for a fixed (config, seed) no
matter how samples are partitioned over workers.  Early termination at
the first collision keeps the expected per-sample cost near O(1): for
every set with exponent above 2 the collision-time tail is summable.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from ._hashgrid import (U64, grid_contains, grid_insert, pack_point, raw_draw,
                        stream_key)
from .errors import StatisticalAbortError, ValidationError
from .lattice import LatticePoint
from .multiplier import FINITE, WEDGE, MultiplierSet
from .collision import WEDGE_BINS, wedge_bin_margin

_DIRX = np.array([1, 0, -1, 0], dtype=np.int64)
_DIRY = np.array([0, 1, 0, -1], dtype=np.int64)

_ONE = U64(1)
_FULL = U64(0xFFFFFFFFFFFFFFFF)
_TWOPI = 2 * math.pi


def default_horizons(max_steps: int) -> tuple[int, ...]:
    """Powers of two from 16 up to max_steps, then max_steps itself."""
    if max_steps < 1:
        raise ValidationError("max_steps must be >= 1")
    ladder = []
    t = 16
    while t < max_steps:
        ladder.append(t)
        t *= 2
    ladder.append(max_steps)
    return tuple(ladder)


def default_offset(multiplier: MultiplierSet) -> int:
    """Smallest positive integer start (a, 0) with no step-0 collision.

    S1 starts at the origin and every multiplier element is nonzero, so
    a * (a_k, 0) never equals 0: a = 1 always qualifies.
    """
    return 1


@dataclass(frozen=True)
class ExperimentConfig:
    multiplier: MultiplierSet
    max_steps: int
    n_samples: int
    seed: int
    offset: int | None = None
    horizons: tuple[int, ...] | None = None
    workers: int = 1
    sample_offset: int = 0

    def __post_init__(self):
        if self.multiplier.kind not in (FINITE, WEDGE):
            raise ValidationError("only finite point sets and wedges are simulatable")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be >= 1")
        if self.n_samples < 1:
            raise ValidationError("n_samples must be >= 1")
        if self.sample_offset < 0:
            raise ValidationError("sample_offset must be >= 0")
        if self.offset is None:
            object.__setattr__(self, "offset", default_offset(self.multiplier))
        if self.offset < 1:
            raise ValidationError("start offset a must be a positive integer")
        if self.horizons is None:
            object.__setattr__(self, "horizons", default_horizons(self.max_steps))
        else:
            object.__setattr__(self, "horizons", tuple(int(t) for t in self.horizons))
        hs = self.horizons
        if not hs or any(h2 <= h1 for h1, h2 in zip(hs, hs[1:])):
            raise ValidationError("horizons must be strictly increasing")
        if hs[0] < 1 or hs[-1] > self.max_steps:
            raise ValidationError("horizons must lie within [1, max_steps]")
        if self.multiplier.kind == FINITE:
            reach = max(abs(p.re) + abs(p.im) for p in self.multiplier.points)
            if reach * (self.offset + self.max_steps) >= 1 << 30:
                raise ValidationError(
                    "walk coordinates would overflow the packed 32-bit range; "
                    "reduce max_steps or the multiplier magnitudes"
                )


@dataclass(frozen=True)
class SurvivalCurve:
    """Survivor counts at each horizon, aggregated over total_samples walks."""

    horizons: tuple[int, ...]
    survivors: tuple[int, ...]
    total_samples: int
    seeds: tuple[int, ...]
    set_descriptor: str
    max_steps: int
    offset: int
    partial: bool = False

    def __post_init__(self):
        if len(self.horizons) != len(self.survivors):
            raise ValidationError("horizons and survivors must align")
        if any(s < 0 or s > self.total_samples for s in self.survivors):
            raise ValidationError("survivor counts must lie in [0, total_samples]")
        if any(s2 > s1 for s1, s2 in zip(self.survivors, self.survivors[1:])):
            raise ValidationError("survivors must be non-increasing across horizons")

    @property
    def p_hat(self) -> np.ndarray:
        return np.asarray(self.survivors, dtype=float) / self.total_samples


def merge(curves: Sequence[SurvivalCurve]) -> SurvivalCurve:
    """Pool several runs of the same experiment into one curve."""
    if not curves:
        raise ValidationError("cannot merge an empty list of curves")
    first = curves[0]
    for c in curves[1:]:
        if (c.horizons != first.horizons or c.set_descriptor != first.set_descriptor
                or c.max_steps != first.max_steps or c.offset != first.offset):
            raise ValidationError("curves to merge must share horizons and walk parameters")
    survivors = tuple(int(sum(c.survivors[k] for c in curves))
                      for k in range(len(first.horizons)))
    return SurvivalCurve(
        horizons=first.horizons,
        survivors=survivors,
        total_samples=sum(c.total_samples for c in curves),
        seeds=tuple(s for c in curves for s in c.seeds),
        set_descriptor=first.set_descriptor,
        max_steps=first.max_steps,
        offset=first.offset,
        partial=any(c.partial for c in curves),
    )


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit(inline="always")
def _pow2_at_least(n):
    cap = 64
    while cap < 3 * n:
        cap *= 2
    return cap


@njit(inline="always")
def _one_finite(key, are, aim, offx, offy, max_steps,
                keys1, st1, mask1, keysa, sta, maska, epoch):
    # returns the first collision step, or -1 when the pair survives
    x1 = np.int64(0)
    y1 = np.int64(0)
    x2 = offx
    y2 = offy
    grid_insert(keys1, st1, mask1, epoch, pack_point(x1, y1))
    for j in range(len(are)):
        px = are[j] * x2 - aim[j] * y2
        py = are[j] * y2 + aim[j] * x2
        grid_insert(keysa, sta, maska, epoch, pack_point(px, py))
    for m in range(1, max_steps + 1):
        draw = raw_draw(key, U64(m - 1))
        d1 = np.int64(draw & U64(3))
        d2 = np.int64((draw >> U64(2)) & U64(3))
        x1 += _DIRX[d1]
        y1 += _DIRY[d1]
        x2 += _DIRX[d2]
        y2 += _DIRY[d2]
        k1 = pack_point(x1, y1)
        if grid_contains(keysa, sta, maska, epoch, k1):
            return m
        grid_insert(keys1, st1, mask1, epoch, k1)
        for j in range(len(are)):
            px = are[j] * x2 - aim[j] * y2
            py = are[j] * y2 + aim[j] * x2
            kp = pack_point(px, py)
            if grid_contains(keys1, st1, mask1, epoch, kp):
                return m
            grid_insert(keysa, sta, maska, epoch, kp)
    return -1


@njit(nogil=True, cache=True)
def _finite_batch(seed, lo, hi, are, aim, offx, offy, max_steps,
                  horizons, counts, steps_out, record_steps):
    cap1 = _pow2_at_least(max_steps + 1)
    capa = _pow2_at_least((max_steps + 1) * len(are))
    keys1 = np.empty(cap1, dtype=np.uint64)
    st1 = np.zeros(cap1, dtype=np.int64)
    keysa = np.empty(capa, dtype=np.uint64)
    sta = np.zeros(capa, dtype=np.int64)
    mask1 = np.int64(cap1 - 1)
    maska = np.int64(capa - 1)
    for i in range(lo, hi):
        key = stream_key(seed, i)
        epoch = i - lo + 1
        c = _one_finite(key, are, aim, offx, offy, max_steps,
                        keys1, st1, mask1, keysa, sta, maska, epoch)
        if record_steps:
            steps_out[i - lo] = c
        for k in range(len(horizons)):
            if c < 0 or c > horizons[k]:
                counts[k] += 1


@njit(inline="always")
def _angle_bin_nb(x, y, nbins):
    th = math.atan2(float(y), float(x))
    if th < 0.0:
        th += _TWOPI
    b = int(th * nbins / _TWOPI)
    if b >= nbins:
        b = nbins - 1
    return b


@njit(inline="always")
def _bin_set(words, wst, epoch, b):
    w = b >> 6
    if wst[w] != epoch:
        wst[w] = epoch
        words[w] = U64(0)
    words[w] |= _ONE << U64(b & 63)


@njit(inline="always")
def _range_any(words, wst, epoch, lo, hi):
    # any set bit with index in [lo, hi], 0 <= lo <= hi < nbins
    wl = lo >> 6
    wh = hi >> 6
    for w in range(wl, wh + 1):
        if wst[w] != epoch:
            continue
        m = words[w]
        if w == wl:
            m &= _FULL << U64(lo & 63)
        if w == wh:
            r = hi & 63
            if r < 63:
                m &= (_ONE << U64(r + 1)) - _ONE
        if m != U64(0):
            return True
    return False


@njit(inline="always")
def _wedge_hit_nb(words, wst, epoch, nbins, b, margin):
    lo = b - margin
    hi = b + margin
    if hi - lo + 1 >= nbins:
        return _range_any(words, wst, epoch, 0, nbins - 1)
    if lo < 0:
        return (_range_any(words, wst, epoch, lo + nbins, nbins - 1)
                or _range_any(words, wst, epoch, 0, hi))
    if hi >= nbins:
        return (_range_any(words, wst, epoch, lo, nbins - 1)
                or _range_any(words, wst, epoch, 0, hi - nbins))
    return _range_any(words, wst, epoch, lo, hi)


@njit(inline="always")
def _one_wedge(key, margin, nbins, offx, offy, max_steps,
               words1, wst1, words2, wst2, epoch):
    x1 = np.int64(0)
    y1 = np.int64(0)
    x2 = offx
    y2 = offy
    # S1 starts at the origin: no angle to record yet
    _bin_set(words2, wst2, epoch, _angle_bin_nb(x2, y2, nbins))
    for m in range(1, max_steps + 1):
        draw = raw_draw(key, U64(m - 1))
        d1 = np.int64(draw & U64(3))
        d2 = np.int64((draw >> U64(2)) & U64(3))
        x1 += _DIRX[d1]
        y1 += _DIRY[d1]
        x2 += _DIRX[d2]
        y2 += _DIRY[d2]
        if x1 != 0 or y1 != 0:
            b1 = _angle_bin_nb(x1, y1, nbins)
            if _wedge_hit_nb(words2, wst2, epoch, nbins, b1, margin):
                return m
            _bin_set(words1, wst1, epoch, b1)
        if x2 != 0 or y2 != 0:
            b2 = _angle_bin_nb(x2, y2, nbins)
            if _wedge_hit_nb(words1, wst1, epoch, nbins, b2, margin):
                return m
            _bin_set(words2, wst2, epoch, b2)
    return -1


@njit(nogil=True, cache=True)
def _wedge_batch(seed, lo, hi, margin, nbins, offx, offy, max_steps,
                 horizons, counts, steps_out, record_steps):
    nwords = nbins // 64
    words1 = np.zeros(nwords, dtype=np.uint64)
    wst1 = np.zeros(nwords, dtype=np.int64)
    words2 = np.zeros(nwords, dtype=np.uint64)
    wst2 = np.zeros(nwords, dtype=np.int64)
    for i in range(lo, hi):
        key = stream_key(seed, i)
        epoch = i - lo + 1
        c = _one_wedge(key, margin, nbins, offx, offy, max_steps,
                       words1, wst1, words2, wst2, epoch)
        if record_steps:
            steps_out[i - lo] = c
        for k in range(len(horizons)):
            if c < 0 or c > horizons[k]:
                counts[k] += 1


# --------------------------------------------------------------------------
# python driver
# --------------------------------------------------------------------------

_EMPTY_STEPS = np.empty(0, dtype=np.int64)


def _run_batch(cfg: ExperimentConfig, lo: int, hi: int, horizons: np.ndarray,
               steps_out: np.ndarray | None = None) -> np.ndarray:
    counts = np.zeros(len(horizons), dtype=np.int64)
    record = steps_out is not None
    out = steps_out if record else _EMPTY_STEPS
    if cfg.multiplier.kind == FINITE:
        are = np.array([p.re for p in cfg.multiplier.points], dtype=np.int64)
        aim = np.array([p.im for p in cfg.multiplier.points], dtype=np.int64)
        _finite_batch(cfg.seed, lo, hi, are, aim, cfg.offset, 0, cfg.max_steps,
                      horizons, counts, out, record)
    else:
        margin = wedge_bin_margin(cfg.multiplier.alpha, WEDGE_BINS)
        _wedge_batch(cfg.seed, lo, hi, margin, WEDGE_BINS, cfg.offset, 0,
                     cfg.max_steps, horizons, counts, out, record)
    return counts


def collision_steps(cfg: ExperimentConfig, lo: int = 0, hi: int | None = None
                    ) -> np.ndarray:
    """First-collision step per sample (-1 for survivors); debugging/test aid.

    Indices are absolute stream ids, so slices of a big experiment can be
    replayed in isolation.
    """
    hi = cfg.n_samples if hi is None else hi
    horizons = np.asarray(cfg.horizons, dtype=np.int64)
    steps = np.empty(hi - lo, dtype=np.int64)
    _run_batch(cfg, lo, hi, horizons, steps_out=steps)
    return steps


def lockstep_pair_points(seed: int, sample_index: int, n_steps: int, offset: int
                         ) -> tuple[list[LatticePoint], list[LatticePoint]]:
    """Regenerate the two walks of one sample exactly as the kernel draws them.

    Draw m-1 of stream (seed, sample_index) encodes step m of both walks:
    bits 0-1 move S1, bits 2-3 move S2.
    """
    from .rng import raw, stream_key as py_stream_key

    key = py_stream_key(seed, sample_index)
    p1 = [LatticePoint(0, 0)]
    p2 = [LatticePoint(offset, 0)]
    for m in range(1, n_steps + 1):
        draw = raw(key, m - 1)
        d1 = draw & 3
        d2 = (draw >> 2) & 3
        p1.append(p1[-1] + LatticePoint(int(_DIRX[d1]), int(_DIRY[d1])))
        p2.append(p2[-1] + LatticePoint(int(_DIRX[d2]), int(_DIRY[d2])))
    return p1, p2


def _task_ranges(cfg: ExperimentConfig) -> list[tuple[int, int]]:
    workers = max(1, cfg.workers)
    chunk = max(1, math.ceil(cfg.n_samples / (workers * 8)))
    chunk = min(chunk, 2_000_000)
    lo = cfg.sample_offset
    end = cfg.sample_offset + cfg.n_samples
    ranges = []
    while lo < end:
        hi = min(lo + chunk, end)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def run_experiment(cfg: ExperimentConfig) -> SurvivalCurve:
    """Sample cfg.n_samples walk pairs and aggregate their survival counts.

    Counts are exact sums over per-sample indicators, so the result is
    identical for any worker count.  On KeyboardInterrupt the completed
    batches are aggregated into a curve marked ``partial``.
    """
    horizons = np.asarray(cfg.horizons, dtype=np.int64)
    ranges = _task_ranges(cfg)
    totals = np.zeros(len(horizons), dtype=np.int64)
    done_samples = 0
    interrupted = False

    if cfg.workers <= 1:
        try:
            for lo, hi in ranges:
                totals += _run_batch(cfg, lo, hi, horizons)
                done_samples += hi - lo
        except KeyboardInterrupt:
            interrupted = True
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {pool.submit(_run_batch, cfg, lo, hi, horizons): (lo, hi)
                       for lo, hi in ranges}
            pending = set(futures)
            try:
                while pending:
                    finished, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in finished:
                        totals += fut.result()
                        lo, hi = futures[fut]
                        done_samples += hi - lo
            except KeyboardInterrupt:
                interrupted = True
                for fut in pending:
                    fut.cancel()

    if not interrupted:
        done_samples = cfg.n_samples

    curve = SurvivalCurve(
        horizons=cfg.horizons,
        survivors=tuple(int(c) for c in totals),
        total_samples=done_samples,
        seeds=(cfg.seed,),
        set_descriptor=cfg.multiplier.descriptor(),
        max_steps=cfg.max_steps,
        offset=cfg.offset,
        partial=interrupted,
    )
    if curve.survivors[0] == 0:
        warnings.warn(
            "no sample survived the smallest horizon; the start offset may be "
            "too small or the multiplier set too large",
            RuntimeWarning,
            stacklevel=2,
        )
    return curve


# --------------------------------------------------------------------------
# output formats
# --------------------------------------------------------------------------

def wilson_interval(successes: int, total: int, z: float = 1.959963984540054
                    ) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if total == 0:
        return (0.0, 1.0)
    p = successes / total
    zz = z * z
    denom = 1.0 + zz / total
    center = (p + zz / (2 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + zz / (4.0 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def write_curve_csv(curve: SurvivalCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["horizon", "survivors", "total", "p_hat", "ci_low", "ci_high"])
        for T, s in zip(curve.horizons, curve.survivors):
            lo, hi = wilson_interval(s, curve.total_samples)
            writer.writerow([
                T, s, curve.total_samples,
                f"{s / curve.total_samples:.10g}", f"{lo:.10g}", f"{hi:.10g}",
            ])


def curve_sidecar(curve: SurvivalCurve, cfg: ExperimentConfig,
                  wall_time_s: float, version: str) -> dict:
    return {
        "set": curve.set_descriptor,
        "max_steps": cfg.max_steps,
        "n_samples": cfg.n_samples,
        "seed": cfg.seed,
        "sample_offset": cfg.sample_offset,
        "offset": cfg.offset,
        "horizons": list(curve.horizons),
        "survivors": list(curve.survivors),
        "workers": cfg.workers,
        "partial": curve.partial,
        "wall_time_s": wall_time_s,
        "version": version,
    }


def write_curve_sidecar(curve: SurvivalCurve, cfg: ExperimentConfig,
                        wall_time_s: float, version: str, path) -> None:
    with open(path, "w") as fh:
        json.dump(curve_sidecar(curve, cfg, wall_time_s, version), fh,
                  indent=2, sort_keys=True)
        fh.write("\n")
