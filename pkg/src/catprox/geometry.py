"""Concrete nonpositively curved geodesic spaces.

Four exactly-representable families: Euclidean space, axis-aligned boxes,
spider metric trees (legs of equal length glued at a center), and the
hyperbolic plane in the hyperboloid model. Each is uniquely geodesic,
geodesically convex (convex combinations never leave the space), and
satisfies the quadratic comparison inequality

    d(z, (1-t)x + ty)^2 <= (1-t) d(z,x)^2 + t d(z,y)^2 - t(1-t) d(x,y)^2,

whose violation is measured by ``cat0_defect``. The bounded families (box,
spider) additionally expose a modulus of total boundedness: a function
``alpha`` such that among any alpha(k)+1 points, two of them lie within
1/(k+1) of each other.

Spaces and points are immutable; every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import SpaceMismatchError, UnboundedSpaceError, UsageError

# Central numeric policy: distance identities are compared at DIST_TOL,
# comparison-inequality defects are allowed up to DEFECT_TOL. Overridable
# per space via the ``tol`` field.
DIST_TOL = 1e-9
DEFECT_TOL = 1e-8
HYPERBOLOID_TOL = 1e-10


@dataclass(frozen=True)
class VectorPoint:
    """A point of a Euclidean space or box, as a coordinate tuple."""

    xs: tuple[float, ...]


@dataclass(frozen=True)
class SpiderPoint:
    """A point of a spider tree: a leg index and an offset from the center.

    The center has the unique representation ``leg=0, offset=0.0``; leg
    indices 1..m address the legs themselves.
    """

    leg: int
    offset: float


@dataclass(frozen=True)
class MinkowskiPoint:
    """A point of the hyperboloid x0^2 - x1^2 - x2^2 = 1, x0 > 0."""

    x0: float
    x1: float
    x2: float


Point = Union[VectorPoint, SpiderPoint, MinkowskiPoint]


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _mink(u, v) -> float:
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _hvec(p: MinkowskiPoint) -> np.ndarray:
    return np.array([p.x0, p.x1, p.x2])


class GeodesicSpace:
    """Common interface of the concrete space families."""

    kind: str = "abstract"
    tol: float = DIST_TOL

    # -- metric structure ------------------------------------------------

    def distance(self, x: Point, y: Point) -> float:
        raise NotImplementedError

    def geodesic_point(self, x: Point, y: Point, t: float) -> Point:
        """The point a fraction ``t`` along the unique geodesic from x to y."""
        raise NotImplementedError

    def contains(self, p: Point) -> bool:
        raise NotImplementedError

    def basepoint(self) -> Point:
        raise NotImplementedError

    def random_point(self, seed, radius_cap: float) -> Point:
        """Deterministic sample within ``radius_cap`` of the basepoint."""
        raise NotImplementedError

    def total_boundedness_modulus(self) -> Callable[[int], int]:
        raise UnboundedSpaceError(
            f"no modulus of total boundedness available for {self.kind}")

    def diameter_bound(self) -> float | None:
        """An upper bound on the diameter, or None when unbounded."""
        return None

    # -- shared helpers ---------------------------------------------------

    def require_member(self, p: Point, name: str = "point") -> None:
        if not self.contains(p):
            raise SpaceMismatchError(
                f"{name} {p!r} does not belong to {self.describe()}")

    def _check_t(self, t: float) -> None:
        if not (0.0 <= t <= 1.0):
            raise UsageError(f"geodesic parameter t={t} outside [0, 1]")

    def cat0_defect(self, z: Point, x: Point, y: Point, t: float) -> float:
        """LHS minus RHS of the comparison inequality; <= 0 up to rounding."""
        self._check_t(t)
        for name, p in (("z", z), ("x", x), ("y", y)):
            self.require_member(p, name)
        mid = self.geodesic_point(x, y, t)
        lhs = self.distance(z, mid) ** 2
        rhs = ((1.0 - t) * self.distance(z, x) ** 2
               + t * self.distance(z, y) ** 2
               - t * (1.0 - t) * self.distance(x, y) ** 2)
        return lhs - rhs

    def describe(self) -> str:
        return self.kind

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class EuclideanSpace(GeodesicSpace):
    """R^dim with the Euclidean metric; unbounded."""

    dim: int
    tol: float = DIST_TOL
    kind = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise UsageError("euclidean dimension must be >= 1")

    def point(self, *xs: float) -> VectorPoint:
        if len(xs) == 1 and isinstance(xs[0], (tuple, list, np.ndarray)):
            xs = tuple(xs[0])
        if len(xs) != self.dim:
            raise UsageError(f"expected {self.dim} coordinates, got {len(xs)}")
        return VectorPoint(tuple(float(v) for v in xs))

    def contains(self, p: Point) -> bool:
        return isinstance(p, VectorPoint) and len(p.xs) == self.dim

    def distance(self, x: Point, y: Point) -> float:
        self.require_member(x, "x")
        self.require_member(y, "y")
        return math.dist(x.xs, y.xs)

    def geodesic_point(self, x: Point, y: Point, t: float) -> Point:
        self._check_t(t)
        self.require_member(x, "x")
        self.require_member(y, "y")
        return VectorPoint(tuple((1.0 - t) * a + t * b
                                 for a, b in zip(x.xs, y.xs)))

    def basepoint(self) -> VectorPoint:
        return VectorPoint((0.0,) * self.dim)

    def random_point(self, seed, radius_cap: float) -> VectorPoint:
        if radius_cap <= 0:
            raise UsageError("radius_cap must be positive")
        rng = _as_rng(seed)
        direction = rng.normal(size=self.dim)
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            return self.basepoint()
        radius = radius_cap * float(rng.uniform()) ** (1.0 / self.dim)
        return VectorPoint(tuple(radius * d / norm for d in direction))

    def describe(self) -> str:
        return f"euclidean({self.dim})"

    def to_config(self) -> dict:
        return {"kind": "euclidean", "dim": self.dim}


@dataclass(frozen=True)
class BoxSpace(GeodesicSpace):
    """An axis-aligned product of closed intervals; bounded and convex."""

    bounds: tuple[tuple[float, float], ...]
    tol: float = DIST_TOL
    kind = "box"

    def __post_init__(self):
        if not self.bounds:
            raise UsageError("box needs at least one axis")
        norm = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", norm)
        for lo, hi in norm:
            if not lo < hi:
                raise UsageError(f"box bounds must satisfy lower < upper, got [{lo}, {hi}]")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def point(self, *xs: float) -> VectorPoint:
        if len(xs) == 1 and isinstance(xs[0], (tuple, list, np.ndarray)):
            xs = tuple(xs[0])
        p = VectorPoint(tuple(float(v) for v in xs))
        self.require_member(p)
        return p

    def contains(self, p: Point) -> bool:
        if not isinstance(p, VectorPoint) or len(p.xs) != self.dim:
            return False
        return all(lo - self.tol <= v <= hi + self.tol
                   for v, (lo, hi) in zip(p.xs, self.bounds))

    def _clamp(self, xs) -> tuple[float, ...]:
        return tuple(min(max(v, lo), hi)
                     for v, (lo, hi) in zip(xs, self.bounds))

    def distance(self, x: Point, y: Point) -> float:
        self.require_member(x, "x")
        self.require_member(y, "y")
        return math.dist(x.xs, y.xs)

    def geodesic_point(self, x: Point, y: Point, t: float) -> Point:
        self._check_t(t)
        self.require_member(x, "x")
        self.require_member(y, "y")
        xs = tuple((1.0 - t) * a + t * b for a, b in zip(x.xs, y.xs))
        return VectorPoint(self._clamp(xs))

    def basepoint(self) -> VectorPoint:
        return VectorPoint(tuple(0.5 * (lo + hi) for lo, hi in self.bounds))

    def random_point(self, seed, radius_cap: float) -> VectorPoint:
        if radius_cap <= 0:
            raise UsageError("radius_cap must be positive")
        rng = _as_rng(seed)
        xs = np.array([rng.uniform(lo, hi) for lo, hi in self.bounds])
        center = np.array(self.basepoint().xs)
        offset = xs - center
        norm = float(np.linalg.norm(offset))
        if norm > radius_cap:
            xs = center + offset * (radius_cap / norm)
        return VectorPoint(self._clamp(tuple(float(v) for v in xs)))

    def diameter_bound(self) -> float:
        return math.sqrt(sum((hi - lo) ** 2 for lo, hi in self.bounds))

    def total_boundedness_modulus(self) -> Callable[[int], int]:
        # Grid of cells with diameter <= 1/(k+1); pigeonhole gives the bound.
        sides = [hi - lo for lo, hi in self.bounds]
        root = math.sqrt(self.dim)

        def alpha(k: int) -> int:
            cells = 1
            for side in sides:
                cells *= math.ceil(side * (k + 1) * root)
            return cells

        return alpha

    def describe(self) -> str:
        axes = ", ".join(f"[{lo}, {hi}]" for lo, hi in self.bounds)
        return f"box({axes})"

    def to_config(self) -> dict:
        return {"kind": "box", "bounds": [list(b) for b in self.bounds]}


@dataclass(frozen=True)
class SpiderSpace(GeodesicSpace):
    """A metric tree of ``legs`` segments of length ``leg_length`` glued at a center.

    Distances run through the center when the endpoints sit on different
    legs: same leg |s - t|, different legs s + t.
    """

    legs: int
    leg_length: float
    tol: float = DIST_TOL
    kind = "spider"

    def __post_init__(self):
        if self.legs < 2:
            raise UsageError("spider needs at least 2 legs")
        if not self.leg_length > 0:
            raise UsageError("spider leg length must be positive")
        object.__setattr__(self, "leg_length", float(self.leg_length))

    def point(self, leg: int, offset: float) -> SpiderPoint:
        p = self._canon(SpiderPoint(int(leg), float(offset)))
        self.require_member(p)
        return p

    def center(self) -> SpiderPoint:
        return SpiderPoint(0, 0.0)

    def leg_point(self, leg: int, offset: float) -> SpiderPoint:
        """Canonical point at ``offset`` along ``leg`` (center for offset 0)."""
        return self._canon(SpiderPoint(int(leg), float(offset)))

    @staticmethod
    def _canon(p: SpiderPoint) -> SpiderPoint:
        if p.offset == 0.0 and p.leg != 0:
            return SpiderPoint(0, 0.0)
        return p

    def contains(self, p: Point) -> bool:
        if not isinstance(p, SpiderPoint):
            return False
        if p.leg == 0:
            return abs(p.offset) <= self.tol
        return (1 <= p.leg <= self.legs
                and -self.tol <= p.offset <= self.leg_length + self.tol)

    def distance(self, x: Point, y: Point) -> float:
        self.require_member(x, "x")
        self.require_member(y, "y")
        x, y = self._canon(x), self._canon(y)
        if x.leg == y.leg:
            return abs(x.offset - y.offset)
        if x.leg == 0:
            return y.offset
        if y.leg == 0:
            return x.offset
        return x.offset + y.offset

    def geodesic_point(self, x: Point, y: Point, t: float) -> Point:
        self._check_t(t)
        self.require_member(x, "x")
        self.require_member(y, "y")
        x, y = self._canon(x), self._canon(y)
        if x.leg == y.leg or y.leg == 0:
            # Single-leg path (y at the center is the leg-x case run backwards).
            if y.leg == 0:
                return self._canon(SpiderPoint(x.leg, (1.0 - t) * x.offset))
            return self._canon(
                SpiderPoint(x.leg, (1.0 - t) * x.offset + t * y.offset))
        if x.leg == 0:
            return self._canon(SpiderPoint(y.leg, t * y.offset))
        walked = t * (x.offset + y.offset)
        if walked <= x.offset:
            return self._canon(SpiderPoint(x.leg, x.offset - walked))
        return self._canon(SpiderPoint(y.leg, walked - x.offset))

    def basepoint(self) -> SpiderPoint:
        return self.center()

    def random_point(self, seed, radius_cap: float) -> SpiderPoint:
        if radius_cap <= 0:
            raise UsageError("radius_cap must be positive")
        rng = _as_rng(seed)
        leg = int(rng.integers(1, self.legs + 1))
        offset = float(rng.uniform(0.0, min(self.leg_length, radius_cap)))
        return self._canon(SpiderPoint(leg, offset))

    def diameter_bound(self) -> float:
        return 2.0 * self.leg_length

    def total_boundedness_modulus(self) -> Callable[[int], int]:
        # Each leg split into intervals of length <= 1/(k+1).
        legs, length = self.legs, self.leg_length

        def alpha(k: int) -> int:
            return legs * math.ceil(length * (k + 1))

        return alpha

    def describe(self) -> str:
        return f"spider({self.legs}, {self.leg_length})"

    def to_config(self) -> dict:
        return {"kind": "spider", "legs": self.legs,
                "leg_length": self.leg_length}


@dataclass(frozen=True)
class HyperbolicPlane(GeodesicSpace):
    """The hyperbolic plane as the upper sheet of the unit hyperboloid.

    Points are Minkowski triples with x0^2 - x1^2 - x2^2 = 1 and x0 > 0;
    distances are arccosh of the negated Minkowski inner product. Results
    of arithmetic are re-normalized onto the sheet to control drift.
    """

    tol: float = DIST_TOL
    kind = "hyperbolic2"

    def point(self, x0: float, x1: float, x2: float) -> MinkowskiPoint:
        p = self._renorm(np.array([float(x0), float(x1), float(x2)]))
        self.require_member(p)
        return p

    def from_polar(self, r: float, phi: float) -> MinkowskiPoint:
        return MinkowskiPoint(math.cosh(r),
                              math.sinh(r) * math.cos(phi),
                              math.sinh(r) * math.sin(phi))

    @staticmethod
    def _renorm(v: np.ndarray) -> MinkowskiPoint:
        q = -_mink(v, v)
        if q <= 0:
            raise UsageError(f"vector {v} cannot be normalized onto the hyperboloid")
        v = v / math.sqrt(q)
        if v[0] < 0:
            v = -v
        return MinkowskiPoint(float(v[0]), float(v[1]), float(v[2]))

    def contains(self, p: Point) -> bool:
        if not isinstance(p, MinkowskiPoint):
            return False
        v = _hvec(p)
        return abs(_mink(v, v) + 1.0) <= HYPERBOLOID_TOL and p.x0 > 0

    def distance(self, x: Point, y: Point) -> float:
        self.require_member(x, "x")
        self.require_member(y, "y")
        c = -_mink(_hvec(x), _hvec(y))
        return math.acosh(max(c, 1.0))

    def log(self, x: MinkowskiPoint, y: MinkowskiPoint) -> np.ndarray:
        """Tangent vector at x pointing to y, with Minkowski norm d(x, y)."""
        d = self.distance(x, y)
        if d < 1e-15:
            return np.zeros(3)
        xv, yv = _hvec(x), _hvec(y)
        u = yv - math.cosh(d) * xv
        return u * (d / math.sinh(d))

    def exp(self, x: MinkowskiPoint, v: np.ndarray) -> MinkowskiPoint:
        """Geodesic step from x with tangent v (Minkowski-norm speed)."""
        n2 = _mink(v, v)
        if n2 <= 0:
            return x
        n = math.sqrt(n2)
        return self._renorm(math.cosh(n) * _hvec(x) + math.sinh(n) * (v / n))

    def tangent_norm(self, v: np.ndarray) -> float:
        return math.sqrt(max(_mink(v, v), 0.0))

    def geodesic_point(self, x: Point, y: Point, t: float) -> Point:
        self._check_t(t)
        self.require_member(x, "x")
        self.require_member(y, "y")
        d = self.distance(x, y)
        if d < 1e-15:
            return x
        return self.exp(x, t * self.log(x, y))

    def basepoint(self) -> MinkowskiPoint:
        return MinkowskiPoint(1.0, 0.0, 0.0)

    def random_point(self, seed, radius_cap: float) -> MinkowskiPoint:
        if radius_cap <= 0:
            raise UsageError("radius_cap must be positive")
        rng = _as_rng(seed)
        r = float(rng.uniform(0.0, radius_cap))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        return self.from_polar(r, phi)

    def describe(self) -> str:
        return "hyperbolic2"

    def to_config(self) -> dict:
        return {"kind": "hyperbolic2"}


# -- scenario (de)serialization -------------------------------------------

def space_from_config(cfg: dict) -> GeodesicSpace:
    kind = cfg.get("kind")
    if kind == "euclidean":
        return EuclideanSpace(dim=int(cfg["dim"]))
    if kind == "box":
        return BoxSpace(bounds=tuple(tuple(b) for b in cfg["bounds"]))
    if kind == "spider":
        return SpiderSpace(legs=int(cfg["legs"]),
                           leg_length=float(cfg["leg_length"]))
    if kind == "hyperbolic2":
        return HyperbolicPlane()
    raise UsageError(f"unknown space kind {kind!r}")


def point_to_config(p: Point):
    if isinstance(p, VectorPoint):
        return list(p.xs)
    if isinstance(p, SpiderPoint):
        return {"leg": p.leg, "offset": p.offset}
    if isinstance(p, MinkowskiPoint):
        return [p.x0, p.x1, p.x2]
    raise UsageError(f"unknown point type {type(p)!r}")


def point_from_config(space: GeodesicSpace, obj) -> Point:
    if isinstance(space, (EuclideanSpace, BoxSpace)):
        p = VectorPoint(tuple(float(v) for v in obj))
    elif isinstance(space, SpiderSpace):
        p = space._canon(SpiderPoint(int(obj["leg"]), float(obj["offset"])))
    elif isinstance(space, HyperbolicPlane):
        p = space.point(*obj)
    else:
        raise UsageError(f"unknown space {space!r}")
    space.require_member(p)
    return p
