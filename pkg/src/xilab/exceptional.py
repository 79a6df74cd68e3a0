"""Detection of A-exceptional times on a sampled walk.

A time t is A-exceptional at scale [eps, R] when the recentred past
window {B_s - B_t : s in [t-R, t-eps]} is disjoint from every multiplier
image a * {B_s' - B_t : s' in [t+eps, t+R]}.  For A = {1} these are the
local cut times of the walk.  Membership is tested exactly on Gaussian
integers with a per-time hash grid.

Pivot angles are measured geometrically: the past and future windows are
polygonal curves, and the maximal pivot angle at t is the largest grid
angle alpha such that rotating the future curve by every theta in
(0, alpha] keeps it disjoint from the past curve.  Rotated coordinates
are floats, so segment disjointness is decided with a small proximity
tolerance; quantization can only shrink the reported angle, never inflate
it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._hashgrid import (U64, grid_contains, grid_insert, mix64, pack_point)
from .errors import ValidationError
from .lattice import LatticePath
from .multiplier import FINITE, MultiplierSet

_TWOPI = 2.0 * math.pi
_GEOM_TOL = 1e-9  # absolute slack for rotated segment disjointness

MAX_SCAN_POSITIONS = 100_000


@dataclass(frozen=True)
class ExceptionalScan:
    """Exceptional time indices found on one path at scale [epsilon, R]."""

    path_ref: str
    epsilon: int
    R: int
    stride: int
    times: np.ndarray
    skipped: int
    n_scanned: int
    realized_eps_radius: float | None = None
    realized_r_radius: float | None = None


@dataclass(frozen=True)
class PivotReport:
    t: int
    max_angle: float
    angular_resolution: float
    revisited: bool = False
    truncated: bool = False


@njit(inline="always")
def _pow2_at_least(n):
    cap = 64
    while cap < 3 * n:
        cap *= 2
    return cap


@njit(nogil=True, cache=True)
def _scan_kernel(xs, ys, are, aim, eps, R, stride, out):
    n_steps = len(xs) - 1
    cap = _pow2_at_least(R + 1)
    keys = np.empty(cap, dtype=np.uint64)
    st = np.zeros(cap, dtype=np.int64)
    mask = np.int64(cap - 1)
    count = 0
    skipped = 0
    scanned = 0
    epoch = 0
    for t in range(0, n_steps + 1, stride):
        if t - R < 0 or t + R > n_steps:
            skipped += 1
            continue
        scanned += 1
        epoch += 1
        bx = xs[t]
        by = ys[t]
        for s in range(t - R, t - eps + 1):
            grid_insert(keys, st, mask, epoch, pack_point(xs[s] - bx, ys[s] - by))
        hit = False
        for s in range(t + eps, t + R + 1):
            fx = xs[s] - bx
            fy = ys[s] - by
            for j in range(len(are)):
                px = are[j] * fx - aim[j] * fy
                py = are[j] * fy + aim[j] * fx
                if grid_contains(keys, st, mask, epoch, pack_point(px, py)):
                    hit = True
                    break
            if hit:
                break
        if not hit:
            out[count] = t
            count += 1
    return count, skipped, scanned


def default_stride(n_steps: int) -> int:
    """Stride 1 up to 1e5 scan positions, then the smallest stride that
    keeps the scan within that budget."""
    return max(1, math.ceil((n_steps + 1) / MAX_SCAN_POSITIONS))


def find_exceptional_times(path: LatticePath, multiplier: MultiplierSet,
                           epsilon: int, R: int, stride: int | None = None
                           ) -> ExceptionalScan:
    """Scan the t-grid for A-exceptional times at scale [epsilon, R].

    Grid positions whose windows stick out of the path are skipped and
    counted.  Realized window radii (medians of |B_{t+eps} - B_t| and
    |B_{t+R} - B_t| over reported times) are attached so results can be
    read on either the step scale or the radius scale.
    """
    if multiplier.kind != FINITE:
        raise ValidationError("exceptional-time scans require a finite point set")
    if not 0 < epsilon < R:
        raise ValidationError("scales must satisfy 0 < epsilon < R")
    if stride is None:
        stride = default_stride(path.n_steps)
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    are = np.array([p.re for p in multiplier.points], dtype=np.int64)
    aim = np.array([p.im for p in multiplier.points], dtype=np.int64)
    grid_size = path.n_steps // stride + 1
    out = np.empty(grid_size, dtype=np.int64)
    count, skipped, scanned = _scan_kernel(path.xs, path.ys, are, aim,
                                           epsilon, R, stride, out)
    times = out[:count].copy()
    r_eps = r_r = None
    if count:
        de = np.hypot(path.xs[times + epsilon] - path.xs[times],
                      path.ys[times + epsilon] - path.ys[times])
        dr = np.hypot(path.xs[times + R] - path.xs[times],
                      path.ys[times + R] - path.ys[times])
        r_eps = float(np.median(de))
        r_r = float(np.median(dr))
    return ExceptionalScan(
        path_ref=path.label or f"path({path.n_steps} steps)",
        epsilon=epsilon,
        R=R,
        stride=stride,
        times=times,
        skipped=skipped,
        n_scanned=scanned,
        realized_eps_radius=r_eps,
        realized_r_radius=r_r,
    )


# --------------------------------------------------------------------------
# pivot angles
# --------------------------------------------------------------------------

@njit(inline="always")
def _pt_seg_dist2(px, py, ax, ay, bx, by):
    vx = bx - ax
    vy = by - ay
    wx = px - ax
    wy = py - ay
    vv = vx * vx + vy * vy
    if vv <= 0.0:
        return wx * wx + wy * wy
    u = (wx * vx + wy * vy) / vv
    if u < 0.0:
        u = 0.0
    elif u > 1.0:
        u = 1.0
    dx = wx - u * vx
    dy = wy - u * vy
    return dx * dx + dy * dy


@njit(inline="always")
def _segments_close(ax, ay, bx, by, cx, cy, dx, dy, tol2):
    d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    if ((d1 > 0.0) != (d2 > 0.0)) and ((d3 > 0.0) != (d4 > 0.0)):
        return True
    if _pt_seg_dist2(ax, ay, cx, cy, dx, dy) <= tol2:
        return True
    if _pt_seg_dist2(bx, by, cx, cy, dx, dy) <= tol2:
        return True
    if _pt_seg_dist2(cx, cy, ax, ay, bx, by) <= tol2:
        return True
    if _pt_seg_dist2(dx, dy, ax, ay, bx, by) <= tol2:
        return True
    return False


@njit(inline="always")
def _cell_of(v, cell):
    return np.int64(math.floor(v / cell))


@njit(inline="always")
def _find_cell(hkeys, hused, mask, ck):
    i = np.int64(mix64(ck)) & mask
    while True:
        if not hused[i]:
            return np.int64(-1)
        if hkeys[i] == ck:
            return i
        i = (i + 1) & mask


@njit(cache=True)
def _pivot_kernel(xs, ys, t, eps, R, res, cap_angle, step_len):
    """Largest passing grid angle at time t; returns (angle, revisited, truncated)."""
    bx = xs[t]
    by = ys[t]
    for s in range(t - R, t - eps + 1):
        if xs[s] == bx and ys[s] == by:
            return 0.0, True, False
    for s in range(t + eps, t + R + 1):
        if xs[s] == bx and ys[s] == by:
            return 0.0, True, False

    npts = R - eps + 1
    nseg = npts - 1
    pax = np.empty(nseg)
    pay = np.empty(nseg)
    pbx = np.empty(nseg)
    pby = np.empty(nseg)
    k = 0
    for s in range(t - R, t - eps):
        pax[k] = xs[s] - bx
        pay[k] = ys[s] - by
        pbx[k] = xs[s + 1] - bx
        pby[k] = ys[s + 1] - by
        k += 1
    fx = np.empty(npts)
    fy = np.empty(npts)
    k = 0
    for s in range(t + eps, t + R + 1):
        fx[k] = xs[s] - bx
        fy[k] = ys[s] - by
        k += 1

    # hash the past segments into cells of size 2*step_len, at both endpoints
    cell = 2.0 * step_len
    nentry = 2 * nseg
    cap = _pow2_at_least(nentry)
    mask = np.int64(cap - 1)
    hkeys = np.empty(cap, dtype=np.uint64)
    hused = np.zeros(cap, dtype=np.bool_)
    head = np.full(cap, -1, dtype=np.int64)
    nxt = np.empty(nentry, dtype=np.int64)
    for i in range(nseg):
        for e in range(2):
            if e == 0:
                ck = pack_point(_cell_of(pax[i], cell), _cell_of(pay[i], cell))
            else:
                ck = pack_point(_cell_of(pbx[i], cell), _cell_of(pby[i], cell))
            j = np.int64(mix64(ck)) & mask
            while hused[j] and hkeys[j] != ck:
                j = (j + 1) & mask
            if not hused[j]:
                hused[j] = True
                hkeys[j] = ck
            entry = 2 * i + e
            nxt[entry] = head[j]
            head[j] = entry

    tol2 = _GEOM_TOL * _GEOM_TOL
    theta_hi = min(cap_angle, _TWOPI - res)
    kmax = int(theta_hi / res + 1e-12)
    last_ok = 0
    for kk in range(1, kmax + 1):
        theta = kk * res
        ct = math.cos(theta)
        st = math.sin(theta)
        hit = False
        for i in range(nseg):
            r1x = fx[i] * ct - fy[i] * st
            r1y = fx[i] * st + fy[i] * ct
            r2x = fx[i + 1] * ct - fy[i + 1] * st
            r2y = fx[i + 1] * st + fy[i + 1] * ct
            cx0 = _cell_of(r1x, cell)
            cy0 = _cell_of(r1y, cell)
            for ddx in range(-1, 2):
                for ddy in range(-1, 2):
                    slot = _find_cell(hkeys, hused, mask,
                                      pack_point(cx0 + ddx, cy0 + ddy))
                    if slot < 0:
                        continue
                    e = head[slot]
                    while e >= 0:
                        seg = e >> 1
                        if _segments_close(r1x, r1y, r2x, r2y,
                                           pax[seg], pay[seg],
                                           pbx[seg], pby[seg], tol2):
                            hit = True
                            break
                        e = nxt[e]
                    if hit:
                        break
                if hit:
                    break
            if hit:
                break
        if hit:
            return last_ok * res, False, False
        last_ok = kk
    truncated = theta_hi < _TWOPI - res
    return last_ok * res, False, truncated


def max_pivot_angle(path: LatticePath, t: int, epsilon: int, R: int,
                    angular_resolution: float,
                    theta_cap: float | None = None) -> PivotReport:
    """Largest rotation (on the resolution grid) the future window survives.

    The scan walks theta = res, 2*res, ... and stops at the first rotation
    that brings the future polyline within reach of the past one; passing
    ``theta_cap`` stops early once that angle has been certified (the
    report is then marked truncated).
    """
    if not 0 < epsilon < R:
        raise ValidationError("scales must satisfy 0 < epsilon < R")
    if not 0 < angular_resolution < _TWOPI:
        raise ValidationError("angular resolution must lie in (0, 2*pi)")
    if t - R < 0 or t + R > path.n_steps:
        raise ValidationError("windows at t stick out of the path")
    cap = _TWOPI if theta_cap is None else float(theta_cap)
    step_len = math.sqrt(path.step.norm2())
    angle, revisited, truncated = _pivot_kernel(
        path.xs, path.ys, t, epsilon, R, float(angular_resolution), cap, step_len)
    return PivotReport(
        t=t,
        max_angle=float(angle),
        angular_resolution=float(angular_resolution),
        revisited=bool(revisited),
        truncated=bool(truncated),
    )


def pivot_scan(path: LatticePath, times, epsilon: int, R: int,
               angular_resolution: float, theta_cap: float | None = None
               ) -> list[PivotReport]:
    """max_pivot_angle across many candidate times."""
    return [max_pivot_angle(path, int(t), epsilon, R, angular_resolution,
                            theta_cap) for t in times]


# --------------------------------------------------------------------------
# box-counting dimension
# --------------------------------------------------------------------------

def default_box_scales(total_length: int) -> tuple[int, ...]:
    """Dyadic box sizes 2**4 .. 2**(log2(length)/2), clear of both
    saturation regimes."""
    top = int(math.log2(total_length)) // 2
    if top < 6:
        raise ValidationError("path too short for a box-dimension estimate")
    return tuple(2 ** k for k in range(4, top + 1))


def box_counts(times: np.ndarray, scales) -> list[int]:
    times = np.asarray(times, dtype=np.int64)
    return [int(len(np.unique(times // int(d)))) for d in scales]


def box_dimension(times, total_length: int, scales=None) -> float:
    """Least-squares slope of log N(delta) against log(1/delta).

    ``times`` are occupied indices in [0, total_length); N(delta) counts
    occupied boxes of size delta.
    """
    times = np.asarray(times, dtype=np.int64)
    if times.size == 0:
        raise ValidationError("cannot estimate a dimension from an empty time set")
    if scales is None:
        scales = default_box_scales(total_length)
    scales = [int(d) for d in scales]
    if len(scales) < 3:
        raise ValidationError("need at least 3 box scales")
    counts = box_counts(times, scales)
    x = -np.log(np.array(scales, dtype=float))
    y = np.log(np.array(counts, dtype=float))
    slope = float(np.polyfit(x, y, 1)[0])
    return slope
