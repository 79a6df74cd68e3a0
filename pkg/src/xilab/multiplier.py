"""Multiplier sets A acting on walks by pointwise complex multiplication.

Three kinds are supported:

* ``points`` -- a finite set of nonzero Gaussian integers (simulated exactly);
* ``wedge``  -- the wedge {r e^{i t} : r > 0, |t| < alpha/2} of angle alpha;
* ``arc``    -- the unit-circle arc {e^{i t} : 0 <= t <= alpha}, kept as a
  descriptor for pivot geometry (arcs are not lattice sets, so they are
  analyzed geometrically rather than simulated).

A set is *nice* (finite exponent) when it avoids 0, stays in a bounded
annulus and fits in a wedge of angle < 2*pi; wedge/arc kinds therefore
reject alpha >= 2*pi, and finite kinds reject 0 as an element.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

from .errors import ValidationError
from .lattice import LatticePoint

FINITE = "points"
WEDGE = "wedge"
ARC = "arc"

_GAUSS_RE = re.compile(
    r"^(?P<re>[+-]?\d+)?(?P<im>[+-]?\d*)(?P<i>i)?$"
)


def parse_gaussian(text: str) -> LatticePoint:
    """Parse '5', '-1', '4+3i', '5i', '0+1i', 'i', '-i' into a LatticePoint."""
    s = text.strip().replace(" ", "")
    m = _GAUSS_RE.match(s)
    if not m or not s:
        raise ValidationError(f"cannot parse Gaussian integer {text!r}")
    re_part, im_part, has_i = m.group("re"), m.group("im"), m.group("i")
    if has_i is None:
        if im_part:
            raise ValidationError(f"cannot parse Gaussian integer {text!r}")
        return LatticePoint(int(re_part), 0)
    if im_part == "" and re_part is not None:
        # forms like '5i' match with re='5', im=''
        re_part, im_part = None, re_part
    if im_part in ("", "+"):
        im = 1
    elif im_part == "-":
        im = -1
    else:
        im = int(im_part)
    return LatticePoint(int(re_part) if re_part else 0, im)


@dataclass(frozen=True)
class MultiplierSet:
    kind: str
    points: tuple[LatticePoint, ...] = ()
    alpha: float = 0.0
    arc_resolution: int = 0

    def __post_init__(self):
        if self.kind == FINITE:
            if not self.points:
                raise ValidationError("finite multiplier set must be nonempty")
            if any(p == LatticePoint(0, 0) for p in self.points):
                raise ValidationError("0 is not allowed in a multiplier set")
            canon = tuple(sorted(set(self.points)))
            object.__setattr__(self, "points", canon)
        elif self.kind in (WEDGE, ARC):
            if not 0.0 <= self.alpha < 2 * math.pi:
                raise ValidationError(
                    "wedge/arc angle must lie in [0, 2*pi); at 2*pi the "
                    "exponent is infinite"
                )
            if self.kind == ARC and self.arc_resolution < 1:
                raise ValidationError("arc resolution must be >= 1")
        else:
            raise ValidationError(f"unknown multiplier kind {self.kind!r}")

    # --- constructors -------------------------------------------------
    @classmethod
    def from_points(cls, *pts: LatticePoint | complex | int | str) -> "MultiplierSet":
        out = []
        for p in pts:
            if isinstance(p, LatticePoint):
                out.append(p)
            elif isinstance(p, str):
                out.append(parse_gaussian(p))
            elif isinstance(p, complex):
                if p.real != int(p.real) or p.imag != int(p.imag):
                    raise ValidationError(f"{p} is not a Gaussian integer")
                out.append(LatticePoint(int(p.real), int(p.imag)))
            else:
                out.append(LatticePoint(int(p), 0))
        return cls(kind=FINITE, points=tuple(out))

    @classmethod
    def wedge(cls, alpha: float) -> "MultiplierSet":
        return cls(kind=WEDGE, alpha=float(alpha))

    @classmethod
    def arc(cls, alpha: float, resolution: int = 256) -> "MultiplierSet":
        return cls(kind=ARC, alpha=float(alpha), arc_resolution=int(resolution))

    # --- descriptors ---------------------------------------------------
    def descriptor(self) -> str:
        """Canonical string form, stable across runs (used for merge checks)."""
        if self.kind == FINITE:
            return "points:" + ",".join(str(p) for p in self.points)
        if self.kind == WEDGE:
            return f"wedge:alpha={self.alpha:.12g}"
        return f"arc:alpha={self.alpha:.12g},res={self.arc_resolution}"

    @property
    def size(self) -> int:
        return len(self.points)

    def is_finite(self) -> bool:
        return self.kind == FINITE

    # --- exact transforms on finite sets -------------------------------
    def _require_finite(self, op: str):
        if self.kind != FINITE:
            raise ValidationError(f"{op} is only defined for finite point sets")

    def conjugated(self) -> "MultiplierSet":
        """The set of complex conjugates A*."""
        self._require_finite("conjugate")
        return MultiplierSet(FINITE, tuple(p.conjugate() for p in self.points))

    def scaled(self, lam: LatticePoint) -> "MultiplierSet":
        """lam * A for a nonzero Gaussian integer lam."""
        self._require_finite("scale")
        if lam == LatticePoint(0, 0):
            raise ValidationError("scale factor must be nonzero")
        return MultiplierSet(FINITE, tuple(lam * p for p in self.points))

    def power(self, p: int) -> "MultiplierSet":
        """The set {z**p : z in A} for integer p >= 1."""
        self._require_finite("power")
        if p < 1:
            raise ValidationError("power must be >= 1")
        out = []
        for z in self.points:
            w = LatticePoint(1, 0)
            for _ in range(p):
                w = w * z
            out.append(w)
        return MultiplierSet(FINITE, tuple(out))

    def nfold_union(self, n: int) -> "MultiplierSet":
        """Union of e^{2ik pi/n} * A over k; exact only for n in {1, 2, 4}.

        Rotations by 2 pi / n map the lattice to itself only for n = 1, 2, 4
        (the Gaussian units), so other n are rejected rather than rounded.
        """
        self._require_finite("n-fold union")
        if n == 1:
            rots = [LatticePoint(1, 0)]
        elif n == 2:
            rots = [LatticePoint(1, 0), LatticePoint(-1, 0)]
        elif n == 4:
            rots = [LatticePoint(1, 0), LatticePoint(0, 1),
                    LatticePoint(-1, 0), LatticePoint(0, -1)]
        else:
            raise ValidationError(
                f"{n}-fold union leaves the lattice: e^(2i*pi/{n}) times a "
                "Gaussian integer is not a lattice point (allowed n: 1, 2, 4)"
            )
        pts = tuple(r * p for r in rots for p in self.points)
        return MultiplierSet(FINITE, pts)


def log_hausdorff_distance(a: MultiplierSet, b: MultiplierSet) -> float:
    """Hausdorff distance under multiplicative neighborhoods {x e^z : |z| < r}.

    For finite sets this is the symmetrized max-min of |log(z/w)| over
    point pairs (principal branch), which is invariant when both sets are
    multiplied by the same constant.
    """
    if not (a.is_finite() and b.is_finite()):
        raise ValidationError("log-Hausdorff distance requires finite point sets")

    def one_sided(src: MultiplierSet, dst: MultiplierSet) -> float:
        worst = 0.0
        for z in src.points:
            best = min(abs(cmath.log(complex(z) / complex(w))) for w in dst.points)
            worst = max(worst, best)
        return worst

    return max(one_sided(a, b), one_sided(b, a))


def parse_set_spec(spec: str) -> MultiplierSet:
    """Parse the set mini-language used by the CLI and config files.

    Examples: ``points:1,-1``, ``points:5,4+3i,5i``, ``wedge:alpha=1.5708``,
    ``arc:alpha=0.7854,res=256``.
    """
    if ":" not in spec:
        raise ValidationError(f"set spec {spec!r} needs a 'kind:' prefix")
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == FINITE:
        items = [s for s in rest.split(",") if s.strip()]
        if not items:
            raise ValidationError("points spec lists no points")
        return MultiplierSet.from_points(*items)
    if kind in (WEDGE, ARC):
        fields = {}
        for part in rest.split(","):
            if not part.strip():
                continue
            k, _, v = part.partition("=")
            fields[k.strip()] = v.strip()
        if "alpha" not in fields:
            raise ValidationError(f"{kind} spec requires alpha=<radians>")
        try:
            alpha = float(fields["alpha"])
        except ValueError as exc:
            raise ValidationError(f"bad alpha in {spec!r}") from exc
        if kind == WEDGE:
            return MultiplierSet.wedge(alpha)
        res = int(fields.get("res", 256))
        return MultiplierSet.arc(alpha, res)
    raise ValidationError(f"unknown set kind {kind!r}")
