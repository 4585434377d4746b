"""Convex objective functions on a geodesic space.

Three computable families, all geodesically convex on every space in
:mod:`catprox.geometry`:

* ``sq_dist``          f(x) = w * d(x, a)^2      (uniformly convex, phi(t) = w t^2)
* ``weighted_sq_sum``  f(x) = sum_i w_i d(x, a_i)^2   (phi(t) = (sum w_i) t^2)
* ``dist``             f(x) = d(x, a)            (convex, not uniformly convex)

The quadratic uniform-convexity moduli follow from the comparison
inequality applied anchor by anchor. Objectives are immutable; a known
infimum (with the certifying minimizer) is attached at construction time
or through :func:`attach_min`, never cached lazily.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import descent
from .errors import CertificationError, NotUniformlyConvexError, UsageError
from .geometry import (BoxSpace, EuclideanSpace, GeodesicSpace,
                       HyperbolicPlane, Point, SpiderSpace, VectorPoint,
                       point_from_config, point_to_config)
from .linesearch import ternary_min

DEFAULT_ORACLE_PRECISION = 1e-10


@dataclass(frozen=True)
class UCModulus:
    """Quadratic modulus of uniform convexity, phi(t) = coeff * t^2."""

    coeff: float

    def __post_init__(self):
        if not self.coeff > 0:
            raise UsageError("uniform convexity coefficient must be positive")

    def __call__(self, t: float) -> float:
        return self.coeff * t * t


@dataclass(frozen=True)
class Objective:
    space: GeodesicSpace
    kind: str
    anchors: tuple[Point, ...]
    weights: tuple[float, ...]
    min_value: float | None = None
    minimizer: Point | None = None
    uc_modulus: UCModulus | None = None
    oracle_precision: float | None = None

    @property
    def total_weight(self) -> float:
        return sum(self.weights)

    def describe(self) -> str:
        return f"{self.kind} over {self.space.describe()} ({len(self.anchors)} anchor(s))"

    def to_config(self) -> dict:
        cfg = {"kind": self.kind,
               "anchors": [point_to_config(a) for a in self.anchors],
               "weights": list(self.weights)}
        return cfg


def sq_dist(space: GeodesicSpace, anchor: Point, weight: float = 1.0) -> Objective:
    """Weighted squared distance to one anchor; infimum 0 at the anchor."""
    space.require_member(anchor, "anchor")
    if not weight > 0:
        raise UsageError("weight must be positive")
    return Objective(space, "sq_dist", (anchor,), (float(weight),),
                     min_value=0.0, minimizer=anchor,
                     uc_modulus=UCModulus(float(weight)),
                     oracle_precision=0.0)


def weighted_sq_sum(space: GeodesicSpace, anchors, weights) -> Objective:
    """Weighted sum of squared distances to a nonempty anchor family."""
    anchors = tuple(anchors)
    weights = tuple(float(w) for w in weights)
    if not anchors:
        raise UsageError("anchor list must be nonempty")
    if len(anchors) != len(weights):
        raise UsageError("anchors and weights must have equal length")
    for a in anchors:
        space.require_member(a, "anchor")
    if any(w <= 0 for w in weights):
        raise UsageError("weights must be strictly positive")
    return Objective(space, "weighted_sq_sum", anchors, weights,
                     uc_modulus=UCModulus(sum(weights)))


def dist_to(space: GeodesicSpace, anchor: Point) -> Objective:
    """Plain distance to an anchor; convex but not uniformly convex."""
    space.require_member(anchor, "anchor")
    return Objective(space, "dist", (anchor,), (1.0,),
                     min_value=0.0, minimizer=anchor, oracle_precision=0.0)


def evaluate(f: Objective, x: Point) -> float:
    """f(x); finite for all built-in kinds."""
    f.space.require_member(x, "x")
    if f.kind == "sq_dist":
        return f.weights[0] * f.space.distance(x, f.anchors[0]) ** 2
    if f.kind == "weighted_sq_sum":
        return sum(w * f.space.distance(x, a) ** 2
                   for w, a in zip(f.weights, f.anchors))
    if f.kind == "dist":
        return f.space.distance(x, f.anchors[0])
    raise UsageError(f"unknown objective kind {f.kind!r}")


def convexity_defect(f: Objective, x: Point, y: Point, t: float) -> float:
    """f((1-t)x + ty) - [(1-t) f(x) + t f(y)]; <= 0 up to rounding."""
    mid = f.space.geodesic_point(x, y, t)
    return evaluate(f, mid) - ((1.0 - t) * evaluate(f, x) + t * evaluate(f, y))


def uc_defect(f: Objective, x: Point, y: Point, t: float) -> float:
    """Violation of the uniform-convexity inequality with the declared modulus."""
    if f.uc_modulus is None:
        raise NotUniformlyConvexError(
            f"objective {f.describe()} is not uniformly convex")
    f.space._check_t(t)
    mid = f.space.geodesic_point(x, y, t)
    d = f.space.distance(x, y)
    bound = ((1.0 - t) * evaluate(f, x) + t * evaluate(f, y)
             - t * (1.0 - t) * f.uc_modulus(d))
    return evaluate(f, mid) - bound


def lipschitz_bound(f: Objective, points) -> float:
    """A Lipschitz constant for f on the region spanned by ``points``."""
    if f.kind == "dist":
        return 1.0
    reach = 0.0
    for p in points:
        for a in f.anchors:
            reach = max(reach, f.space.distance(p, a))
    return 2.0 * f.total_weight * reach


def _grad_flat(f: Objective, x: VectorPoint) -> np.ndarray:
    xs = np.array(x.xs)
    g = np.zeros(len(xs))
    for w, a in zip(f.weights, f.anchors):
        g += 2.0 * w * (xs - np.array(a.xs))
    return g


def _grad_hyperbolic(f: Objective, x) -> np.ndarray:
    space: HyperbolicPlane = f.space
    g = np.zeros(3)
    for w, a in zip(f.weights, f.anchors):
        g -= 2.0 * w * space.log(x, a)
    return g


def min_oracle(f: Objective, precision: float = DEFAULT_ORACLE_PRECISION):
    """Return ``(min_value, minimizer)`` with value within ``precision`` of the infimum.

    Closed forms where available, per-leg ternary search on spiders,
    certified geodesic descent on the hyperbolic plane.
    """
    if not precision > 0:
        raise UsageError("precision must be positive")
    space = f.space
    if f.kind in ("sq_dist", "dist"):
        return 0.0, f.anchors[0]
    if f.kind != "weighted_sq_sum":
        raise UsageError(f"unknown objective kind {f.kind!r}")

    if isinstance(space, (EuclideanSpace, BoxSpace)):
        total = f.total_weight
        mean = np.zeros(len(f.anchors[0].xs))
        for w, a in zip(f.weights, f.anchors):
            mean += w * np.array(a.xs)
        mean /= total
        z = VectorPoint(tuple(float(v) for v in mean))
        if isinstance(space, BoxSpace):
            z = VectorPoint(space._clamp(z.xs))
        return evaluate(f, z), z

    if isinstance(space, SpiderSpace):
        best = None
        lower = math.inf
        for leg in range(1, space.legs + 1):

            def on_leg(s: float, leg=leg) -> float:
                return evaluate(f, space.leg_point(leg, s))

            res = ternary_min(on_leg, 0.0, space.leg_length,
                              xtol=math.sqrt(precision) * 1e-3)
            lower = min(lower, res.lower_bound)
            if best is None or res.fx < best[0]:
                best = (res.fx, space.leg_point(leg, res.x))
        if best[0] - lower > precision:
            raise CertificationError(
                "spider minimum search could not certify the precision",
                best_point=best[1], best_value=best[0], gap=best[0] - lower)
        return best

    if isinstance(space, HyperbolicPlane):
        # Strong convexity constant 2 * total weight (standard convention)
        # gives the certified value gap from the gradient norm.
        mu = 2.0 * f.total_weight
        res = descent.minimize(space,
                               value=lambda p: evaluate(f, p),
                               grad=lambda p: _grad_hyperbolic(f, p),
                               x0=f.anchors[0],
                               mu=mu,
                               gap_target=precision)
        return res.value, res.point

    raise UsageError(f"unsupported space {space.describe()}")


def attach_min(f: Objective, precision: float = DEFAULT_ORACLE_PRECISION) -> Objective:
    """A copy of f with its infimum and minimizer baked in."""
    if f.min_value is not None and f.minimizer is not None:
        return f
    value, point = min_oracle(f, precision)
    return dataclasses.replace(f, min_value=value, minimizer=point,
                               oracle_precision=precision)


def is_k_approx_minimizer(f: Objective, x: Point, k: int,
                          slack: float = 0.0) -> bool:
    """Whether f(x) <= min(f) + 1/(k+1) + slack.

    Sufficient for membership in the k-approximate minimizer set because
    min(f) bounds f from below everywhere.
    """
    if f.min_value is None:
        raise UsageError("objective has no known min_value; run attach_min first")
    if slack < 0:
        raise UsageError("slack must be nonnegative")
    return evaluate(f, x) <= f.min_value + 1.0 / (k + 1) + slack


def objective_from_config(space: GeodesicSpace, cfg: dict) -> Objective:
    kind = cfg.get("kind")
    if kind == "sq_dist":
        anchor = point_from_config(space, cfg["anchor"])
        return sq_dist(space, anchor, weight=float(cfg.get("weight", 1.0)))
    if kind == "weighted_sq_sum":
        anchors = [point_from_config(space, a) for a in cfg["anchors"]]
        return weighted_sq_sum(space, anchors,
                               [float(w) for w in cfg["weights"]])
    if kind == "dist":
        anchor = point_from_config(space, cfg["anchor"])
        return dist_to(space, anchor)
    raise UsageError(f"unknown objective kind {kind!r}")


def objective_to_config(f: Objective) -> dict:
    if f.kind == "sq_dist":
        return {"kind": "sq_dist", "anchor": point_to_config(f.anchors[0]),
                "weight": f.weights[0]}
    if f.kind == "weighted_sq_sum":
        return {"kind": "weighted_sq_sum",
                "anchors": [point_to_config(a) for a in f.anchors],
                "weights": list(f.weights)}
    if f.kind == "dist":
        return {"kind": "dist", "anchor": point_to_config(f.anchors[0])}
    raise UsageError(f"unknown objective kind {f.kind!r}")
