"""One-dimensional convex minimization by ternary bracketing.

Besides the usual bracket shrinking, ``ternary_min`` returns a certified
lower bound on the minimum over the original interval, obtained from the
secant tent that convexity pins under the final probe values. Callers
convert the certified value gap (best probe minus lower bound) into
distance certificates via strong convexity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class ScalarMinResult:
    x: float
    fx: float
    lower_bound: float
    evals: int
    bracket: float


def _tent_lower_bound(a, fa, m1, f1, m2, f2, b, fb) -> float:
    """Lower bound for a convex function on [a, b] from four probe values."""
    lb = min(fa, f1, f2, fb)
    # Outer pieces: beyond m1 (resp. m2) the secant through (m1, m2) is a
    # support line, so extending it to a (resp. b) bounds f from below.
    if m2 > m1:
        s_mid = (f2 - f1) / (m2 - m1)
        lb = min(lb, f1 + s_mid * (a - m1), f2 + s_mid * (b - m2))
    # Middle piece [m1, m2]: f lies above both outer secant extensions.
    if m1 > a and b > m2:
        s_left = (f1 - fa) / (m1 - a)
        s_right = (fb - f2) / (b - m2)

        def left(x):
            return f1 + s_left * (x - m1)

        def right(x):
            return f2 + s_right * (x - m2)

        candidates = [max(left(m1), right(m1)), max(left(m2), right(m2))]
        if s_left != s_right:
            x_cross = (f2 - f1 + s_left * m1 - s_right * m2) / (s_left - s_right)
            if m1 <= x_cross <= m2:
                candidates.append(max(left(x_cross), right(x_cross)))
        lb = min(lb, min(candidates))
    return lb


def ternary_min(fun: Callable[[float], float], lo: float, hi: float,
                xtol: float, max_iter: int = 600) -> ScalarMinResult:
    """Minimize a convex ``fun`` on [lo, hi] to bracket width ``xtol``.

    The returned ``lower_bound`` is valid for the whole of [lo, hi]: a
    ternary step discards only regions where convexity puts the values
    above the probe retained at the cut.
    """
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    a, b = lo, hi
    fa, fb = fun(a), fun(b)
    evals = 2
    best_x, best_f = (a, fa) if fa <= fb else (b, fb)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        third = (b - a) / 3.0
        m1, m2 = a + third, b - third
        if not (a < m1 < m2 < b):
            break
        f1, f2 = fun(m1), fun(m2)
        evals += 2
        if f1 < best_f:
            best_x, best_f = m1, f1
        if f2 < best_f:
            best_x, best_f = m2, f2
        if f1 <= f2:
            b, fb = m2, f2
        else:
            a, fa = m1, f1
    third = (b - a) / 3.0
    m1, m2 = a + third, b - third
    if a < m1 < m2 < b:
        f1, f2 = fun(m1), fun(m2)
        evals += 2
        if f1 < best_f:
            best_x, best_f = m1, f1
        if f2 < best_f:
            best_x, best_f = m2, f2
        lb = _tent_lower_bound(a, fa, m1, f1, m2, f2, b, fb)
    else:
        lb = min(fa, fb)
    return ScalarMinResult(best_x, best_f, lb, evals, b - a)
