"""Independent brute-force oracles used to validate the fast paths.

Everything here favors obviousness over speed: exhaustive pair scans,
full-window double loops, and a third-party geometry backend (shapely)
for segment intersection, so that agreement with the package is evidence
rather than tautology.
"""

import cmath
import math

from shapely.geometry import LineString

from xilab import LatticePoint


def brute_first_collision(points1, points2, multiplier_points):
    """min over colliding pairs (s, t) of max(s, t), or None.

    A pair collides when points1[s] == a * points2[t] for some a.
    """
    best = None
    for s, p in enumerate(points1):
        key1 = (p.re, p.im)
        for t, q in enumerate(points2):
            for a in multiplier_points:
                img = a * q
                if (img.re, img.im) == key1:
                    step = max(s, t)
                    if best is None or step < best:
                        best = step
    return best


def brute_wedge_collision(points1, points2, threshold):
    """First step at which two visited angles come within ``threshold``.

    Points at the origin are skipped.  Returns None if no pair collides.
    """
    def ang(p):
        return math.atan2(p.im, p.re)

    best = None
    for s, p in enumerate(points1):
        if (p.re, p.im) == (0, 0):
            continue
        for t, q in enumerate(points2):
            if (q.re, q.im) == (0, 0):
                continue
            d = abs(ang(p) - ang(q)) % (2 * math.pi)
            d = min(d, 2 * math.pi - d)
            if d <= threshold:
                step = max(s, t)
                if best is None or step < best:
                    best = step
    return best


def brute_exceptional_times(path, multiplier_points, eps, R, stride=1):
    """Double loop over window pairs for every scan position."""
    pts = path.points()
    n_steps = len(pts) - 1
    times = []
    for t in range(0, n_steps + 1, stride):
        if t - R < 0 or t + R > n_steps:
            continue
        base = pts[t]
        past = {((p - base).re, (p - base).im) for p in pts[t - R:t - eps + 1]}
        hit = False
        for q in pts[t + eps:t + R + 1]:
            for a in multiplier_points:
                img = a * (q - base)
                if (img.re, img.im) in past:
                    hit = True
                    break
            if hit:
                break
        if not hit:
            times.append(t)
    return times


def shapely_rotation_collides(past_pts, future_pts, theta, tol):
    """Third-party check: does the future polyline rotated by theta come
    within ``tol`` of the past polyline?  Points are (x, y) floats already
    recentred at the pivot."""
    rot = cmath.exp(1j * theta)
    rot_pts = [((complex(x, y) * rot).real, (complex(x, y) * rot).imag)
               for x, y in future_pts]
    past_line = LineString(past_pts)
    future_line = LineString(rot_pts)
    return past_line.distance(future_line) <= tol


def brute_pivot_angle(path, t, eps, R, res, tol=1e-9, cap=None):
    """Full-grid pivot angle via shapely; mirrors the kernel's grid semantics."""
    pts = path.points()
    base = pts[t]
    window = pts[t - R:t - eps + 1] + pts[t + eps:t + R + 1]
    if any(p == base for p in window):
        return 0.0, True
    past = [((p - base).re, (p - base).im) for p in pts[t - R:t - eps + 1]]
    future = [((p - base).re, (p - base).im) for p in pts[t + eps:t + R + 1]]
    theta_hi = 2 * math.pi - res if cap is None else min(cap, 2 * math.pi - res)
    kmax = int(theta_hi / res + 1e-12)
    last_ok = 0
    for k in range(1, kmax + 1):
        if shapely_rotation_collides(past, future, k * res, tol):
            break
        last_ok = k
    return last_ok * res, False


def cantor_like_indices(depth, unit=1):
    """Indices of a middle-thirds construction over [0, 3**depth); keeps the
    first and last thirds recursively (dimension log 2 / log 3)."""
    segments = [(0, 3 ** depth)]
    for _ in range(depth):
        next_segments = []
        for lo, hi in segments:
            third = (hi - lo) // 3
            next_segments.append((lo, lo + third))
            next_segments.append((hi - third, hi))
        segments = next_segments
    out = []
    for lo, hi in segments:
        out.extend(range(lo, hi, unit))
    return sorted(out)
