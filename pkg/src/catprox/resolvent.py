"""Proximal mappings with certified accuracy.

``resolve`` computes the proximal point of an objective f at step gamma,

    prox(x) = argmin_y [ f(y) + d(x, y)^2 / (2 gamma) ],

returning a point together with ``certified_error``, a guaranteed upper
bound on its distance to the exact minimizer. The proximal objective is
(1/gamma)-strongly convex along geodesics, so any certified value gap g
converts into the distance bound sqrt(2 gamma g); iterative strategies
shrink their search until that certificate meets the requested delta.

Strategies:

* single-anchor kinds (``sq_dist``, ``dist``): the minimizer lies on the
  geodesic from x to the anchor (projecting onto that geodesic decreases
  both terms), and the restricted problem is one-dimensional with a
  closed-form solution — a geodesic step of explicit length.
* flat ``weighted_sq_sum``: closed-form convex combination.
* spider ``weighted_sq_sum``: per-leg ternary search, best leg wins, with
  a convexity lower bound certifying the cross-leg gap.
* hyperbolic ``weighted_sq_sum``: certified geodesic descent.

``resolve_numerical`` always takes the iterative route and exists so the
closed forms can be cross-checked against an independent solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import descent
from .errors import CertificationError, UsageError
from .geometry import (BoxSpace, EuclideanSpace, GeodesicSpace,
                       HyperbolicPlane, Point, SpiderSpace, VectorPoint)
from .linesearch import ternary_min
from .objective import Objective, _grad_flat, _grad_hyperbolic, evaluate

# Float-arithmetic floor for closed-form certificates.
_CLOSED_FORM_EPS = 1e-12


@dataclass(frozen=True)
class ResolventResult:
    point: Point
    gamma: float
    certified_error: float
    objective_value: float  # proximal objective value at ``point``
    iterations: int


def moreau_value(space: GeodesicSpace, f: Objective, gamma: float,
                 x: Point, y: Point) -> float:
    """The proximal objective f(y) + d(x, y)^2 / (2 gamma)."""
    return evaluate(f, y) + space.distance(x, y) ** 2 / (2.0 * gamma)


def _check_inputs(space: GeodesicSpace, f: Objective, gamma: float,
                  x: Point, delta: float) -> None:
    if f.space is not space and f.space.to_config() != space.to_config():
        raise UsageError("objective was built on a different space")
    if not gamma > 0:
        raise UsageError("gamma must be positive")
    if not delta > 0:
        raise UsageError("delta must be positive")
    space.require_member(x, "x")


def _closed_form_cert(space: GeodesicSpace, scale: float, delta: float) -> float:
    cert = _CLOSED_FORM_EPS * max(1.0, scale)
    if cert > delta:
        raise CertificationError(
            f"requested tolerance {delta} is below the floating-point floor "
            f"of the closed form ({cert})")
    return cert


def _resolve_single_anchor(space, f, gamma, x, delta) -> ResolventResult:
    anchor = f.anchors[0]
    d = space.distance(x, anchor)
    if f.kind == "sq_dist":
        w = f.weights[0]
        t = 2.0 * gamma * w / (1.0 + 2.0 * gamma * w)
    else:  # dist: step of length min(gamma, d) toward the anchor
        if d == 0.0:
            return ResolventResult(x, gamma, 0.0,
                                   moreau_value(space, f, gamma, x, x), 0)
        t = min(gamma / d, 1.0)
    point = space.geodesic_point(x, anchor, t)
    cert = _closed_form_cert(space, d, delta)
    return ResolventResult(point, gamma, cert,
                           moreau_value(space, f, gamma, x, point), 0)


def _resolve_flat_wsum(space, f, gamma, x, delta) -> ResolventResult:
    total = f.total_weight
    mean = np.zeros(len(x.xs))
    for w, a in zip(f.weights, f.anchors):
        mean += 2.0 * gamma * w * np.array(a.xs)
    xs = (np.array(x.xs) + mean) / (1.0 + 2.0 * gamma * total)
    point = VectorPoint(tuple(float(v) for v in xs))
    if isinstance(space, BoxSpace):
        point = VectorPoint(space._clamp(point.xs))
    scale = max(space.distance(x, a) for a in f.anchors)
    cert = _closed_form_cert(space, scale, delta)
    return ResolventResult(point, gamma, cert,
                           moreau_value(space, f, gamma, x, point), 0)


def _certify_1d(gamma: float, best_value: float, lower_bound: float) -> float:
    gap = max(0.0, best_value - lower_bound)
    return math.sqrt(2.0 * gamma * gap)


def _resolve_segment(space, f, gamma, x, delta, max_rounds=40) -> ResolventResult:
    """Ternary search along the geodesic from x to the single anchor."""
    anchor = f.anchors[0]
    span = space.distance(x, anchor)
    if span == 0.0:
        return ResolventResult(x, gamma, 0.0,
                               moreau_value(space, f, gamma, x, x), 0)

    def along(s: float) -> float:
        y = space.geodesic_point(x, anchor, s / span)
        return moreau_value(space, f, gamma, x, y)

    evals = 0
    xtol = max(delta, span * 1e-3)
    for _ in range(max_rounds):
        res = ternary_min(along, 0.0, span, xtol=xtol)
        evals += res.evals
        cert = _certify_1d(gamma, res.fx, res.lower_bound)
        if cert <= delta:
            point = space.geodesic_point(x, anchor, res.x / span)
            return ResolventResult(point, gamma, cert, res.fx, evals)
        if xtol <= span * 1e-15:
            break
        xtol /= 16.0
    raise CertificationError(
        "segment search could not certify the requested tolerance",
        best_point=space.geodesic_point(x, anchor, res.x / span),
        best_value=res.fx, gap=res.fx - res.lower_bound, iterations=evals)


def _resolve_spider(space, f, gamma, x, delta, max_rounds=40) -> ResolventResult:
    """Per-leg ternary search over the whole tree; best leg wins.

    Ties between legs are certified (not just assumed away): the global
    lower bound across legs turns the winning value into a distance bound
    via (1/gamma)-strong convexity.
    """
    evals = 0
    xtol = max(delta, space.leg_length * 1e-3)
    for _ in range(max_rounds):
        best = None
        lower = math.inf
        for leg in range(1, space.legs + 1):

            def on_leg(s: float, leg=leg) -> float:
                return moreau_value(space, f, gamma, x,
                                    space.leg_point(leg, s))

            res = ternary_min(on_leg, 0.0, space.leg_length, xtol=xtol)
            evals += res.evals
            lower = min(lower, res.lower_bound)
            if best is None or res.fx < best[1]:
                best = (space.leg_point(leg, res.x), res.fx)
        cert = _certify_1d(gamma, best[1], lower)
        if cert <= delta:
            return ResolventResult(best[0], gamma, cert, best[1], evals)
        if xtol <= space.leg_length * 1e-15:
            break
        xtol /= 16.0
    raise CertificationError(
        "spider search could not certify the requested tolerance",
        best_point=best[0], best_value=best[1], gap=best[1] - lower,
        iterations=evals)


def _resolve_descent(space, f, gamma, x, delta) -> ResolventResult:
    mu = 1.0 / gamma + 2.0 * f.total_weight

    if isinstance(space, HyperbolicPlane):
        def grad(y):
            return _grad_hyperbolic(f, y) - space.log(y, x) / gamma
    else:
        def grad(y):
            return _grad_flat(f, y) + (np.array(y.xs) - np.array(x.xs)) / gamma

    res = descent.minimize(space,
                           value=lambda y: moreau_value(space, f, gamma, x, y),
                           grad=grad, x0=x, mu=mu, dist_target=delta)
    point = res.point
    if isinstance(space, BoxSpace):
        # The unconstrained optimum lies in the box (it is a convex
        # combination of x and the anchors), so clamping cannot hurt.
        point = VectorPoint(space._clamp(point.xs))
    return ResolventResult(point, gamma, res.dist_bound,
                           moreau_value(space, f, gamma, x, point),
                           res.iterations)


def resolve(space: GeodesicSpace, f: Objective, gamma: float, x: Point,
            delta: float) -> ResolventResult:
    """Proximal point of f at x, certified within ``delta``."""
    _check_inputs(space, f, gamma, x, delta)
    if f.kind in ("sq_dist", "dist"):
        return _resolve_single_anchor(space, f, gamma, x, delta)
    if f.kind == "weighted_sq_sum":
        if isinstance(space, (EuclideanSpace, BoxSpace)):
            return _resolve_flat_wsum(space, f, gamma, x, delta)
        if isinstance(space, SpiderSpace):
            return _resolve_spider(space, f, gamma, x, delta)
        if isinstance(space, HyperbolicPlane):
            return _resolve_descent(space, f, gamma, x, delta)
    raise UsageError(f"no resolvent strategy for kind {f.kind!r} on "
                     f"{space.describe()}")


def resolve_numerical(space: GeodesicSpace, f: Objective, gamma: float,
                      x: Point, delta: float) -> ResolventResult:
    """Iterative-only route, independent of the closed forms."""
    _check_inputs(space, f, gamma, x, delta)
    if isinstance(space, SpiderSpace):
        return _resolve_spider(space, f, gamma, x, delta)
    if f.kind in ("sq_dist", "dist"):
        return _resolve_segment(space, f, gamma, x, delta)
    if f.kind == "weighted_sq_sum":
        return _resolve_descent(space, f, gamma, x, delta)
    raise UsageError(f"no numerical strategy for kind {f.kind!r}")


def fixed_point_defect(space: GeodesicSpace, f: Objective, gamma: float,
                       x: Point, delta: float) -> float:
    """d(x, prox(x)): vanishes (within delta) exactly at minimizers."""
    res = resolve(space, f, gamma, x, delta)
    return space.distance(x, res.point)
