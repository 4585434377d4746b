"""Step-size sequences with certified divergence rates.

A schedule carries, besides the values gamma_n themselves, two certified
companions used by the rate formulas:

* ``theta``: a divergence rate, sum_{n=0}^{theta(P)} gamma_n >= P;
* ``L_bound``: a nondecreasing upper bound on the running maximum of the
  gamma_n (extended to index -1 by L(-1) := L(0), which is sound because
  the only consumer sums over an empty index range there).

Parameters are stored as exact rationals so both certificates evaluate in
exact arithmetic; ``gamma`` returns floats for trajectory use. Built-in
kinds: ``constant``, ``harmonic`` (scale/(n+1)), and ``table`` (explicit
prefix, constant tail).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BudgetExceededError, UsageError

DEFAULT_DIGIT_CAP = 100_000
DEFAULT_TERM_BUDGET = 1_000_000


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, 'p/q' string, or float literal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 12)
    raise UsageError(f"cannot interpret {x!r} as an exact rational")


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    detail: str
    checked_P: int
    checked_L: int
    first_failure: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class StepSchedule:
    kind: str
    c: Fraction | None = None              # constant value / harmonic scale
    values: tuple[Fraction, ...] = ()      # table prefix
    tail: Fraction | None = None
    theta_override: Callable[[int], int] | None = None
    L_override: Callable[[int], Fraction] | None = None

    @property
    def unsafe(self) -> bool:
        """True when user-supplied theta/L overrides bypass the certified ones."""
        return self.theta_override is not None or self.L_override is not None

    # -- values -----------------------------------------------------------

    def gamma_exact(self, n: int) -> Fraction:
        if n < 0:
            raise UsageError("step index must be a natural number")
        if self.kind == "constant":
            return self.c
        if self.kind == "harmonic":
            return self.c / (n + 1)
        if self.kind == "table":
            return self.values[n] if n < len(self.values) else self.tail
        raise UsageError(f"unknown schedule kind {self.kind!r}")

    def gamma(self, n: int) -> float:
        return float(self.gamma_exact(n))

    def partial_sum_exact(self, n: int) -> Fraction:
        """sum_{i=0}^{n} gamma_i in closed form (constant/table kinds)."""
        if self.kind == "constant":
            return (n + 1) * self.c
        if self.kind == "table":
            head = sum(self.values[:n + 1], Fraction(0))
            if n < len(self.values):
                return head
            return head + (n + 1 - len(self.values)) * self.tail
        raise UsageError(f"no closed-form partial sum for {self.kind!r}")

    # -- certified companions ----------------------------------------------

    def theta(self, P: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> int:
        """An index with sum_{n=0}^{theta(P)} gamma_n >= P, exact arithmetic."""
        if P < 0:
            raise UsageError("P must be a natural number")
        if self.theta_override is not None:
            return self.theta_override(P)
        if self.kind == "constant":
            return _ceil(Fraction(P) / self.c)
        if self.kind == "harmonic":
            # H_{4^e} >= 1 + e, so scale * H grows past P by exponent ceil(P/scale).
            e = _ceil(Fraction(P) / self.c)
            max_e = int(digit_cap / math.log10(4))
            if e > max_e:  # int comparison: e may be far too large for float
                digits = math.ceil(e * math.log10(4)) if e.bit_length() < 900 else None
                raise BudgetExceededError(
                    "harmonic divergence index 4^e - 1 exceeds the digit cap",
                    digits=digits)
            return 4 ** e - 1
        if self.kind == "table":
            acc = Fraction(0)
            for i, v in enumerate(self.values):
                acc += v
                if acc >= P:
                    return i
            extra = _ceil((P - acc) / self.tail)
            return len(self.values) - 1 + max(extra, 1)
        raise UsageError(f"unknown schedule kind {self.kind!r}")

    def L_exact(self, k: int) -> Fraction:
        """Nondecreasing bound on max_{0<=i<=k} gamma_i; defined at k = -1."""
        if k < -1:
            raise UsageError("L is defined for k >= -1")
        if self.L_override is not None:
            return self.L_override(max(k, 0))
        if self.kind == "constant":
            return self.c
        if self.kind == "harmonic":
            return self.c  # gamma_0 = scale dominates
        if self.kind == "table":
            k = max(k, 0)
            if k < len(self.values):
                return max(self.values[:k + 1])
            return max(max(self.values, default=self.tail), self.tail)
        raise UsageError(f"unknown schedule kind {self.kind!r}")

    def L_bound(self, k: int) -> float:
        return float(self.L_exact(k))

    def L_int(self, k: int) -> int:
        """Integer-valued bound (ceiling), as the rate formulas require."""
        return _ceil(self.L_exact(k))

    # -- validation ---------------------------------------------------------

    def validate(self, P_cap: int,
                 term_budget: int = DEFAULT_TERM_BUDGET) -> ValidationResult:
        """Brute-force check of both certified inequalities up to ``P_cap``.

        For the harmonic kind the partial sums have no closed form, so
        only P with theta(P) below ``term_budget`` are summed directly
        (float sums with a conservative error allowance).
        """
        checked_P = -1
        for P in range(P_cap + 1):
            try:
                idx = self.theta(P)
            except BudgetExceededError:
                break
            if idx < 0:
                return ValidationResult(
                    False, f"theta({P}) = {idx} is not a valid index",
                    checked_P, -1, first_failure=P)
            if idx + 1 > term_budget:
                break
            if self.kind == "harmonic":
                total = math.fsum(float(self.c) / (n + 1)
                                  for n in range(idx + 1))
                ok = total * (1.0 - 1e-12) - 1e-9 >= P
            else:
                ok = self.partial_sum_exact(idx) >= P
            if not ok:
                return ValidationResult(
                    False, f"partial sum through theta({P}) = {idx} is below {P}",
                    checked_P, -1, first_failure=P)
            checked_P = P

        running = None
        checked_L = -1
        k_cap = min(P_cap, term_budget)
        prev_L = None
        for k in range(k_cap + 1):
            g = self.gamma_exact(k)
            running = g if running is None else max(running, g)
            Lk = self.L_exact(k)
            if prev_L is not None and Lk < prev_L:
                return ValidationResult(
                    False, f"L decreases at k = {k}", checked_P, checked_L,
                    first_failure=k)
            if Lk < running:
                return ValidationResult(
                    False, f"L({k}) = {Lk} is below the running max {running}",
                    checked_P, checked_L, first_failure=k)
            prev_L = Lk
            checked_L = k
        return ValidationResult(True, "ok", checked_P, checked_L)

    # -- construction / serialization ---------------------------------------

    def to_config(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": str(self.c)}
        if self.kind == "harmonic":
            return {"kind": "harmonic", "scale": str(self.c)}
        if self.kind == "table":
            return {"kind": "table", "values": [str(v) for v in self.values],
                    "tail": str(self.tail)}
        raise UsageError(f"unknown schedule kind {self.kind!r}")


def constant_steps(value) -> StepSchedule:
    c = as_fraction(value)
    if c <= 0:
        raise UsageError("constant step must be positive")
    return StepSchedule("constant", c=c)


def harmonic_steps(scale=1) -> StepSchedule:
    c = as_fraction(scale)
    if c <= 0:
        raise UsageError("harmonic scale must be positive")
    return StepSchedule("harmonic", c=c)


def table_steps(values, tail) -> StepSchedule:
    vals = tuple(as_fraction(v) for v in values)
    t = as_fraction(tail)
    if any(v <= 0 for v in vals) or t <= 0:
        raise UsageError("all step values and the tail must be positive")
    if not vals:
        raise UsageError("table schedule needs at least one explicit value")
    return StepSchedule("table", values=vals, tail=t)


def schedule_from_config(cfg: dict) -> StepSchedule:
    kind = cfg.get("kind")
    if kind == "constant":
        return constant_steps(cfg["value"])
    if kind == "harmonic":
        return harmonic_steps(cfg.get("scale", 1))
    if kind == "table":
        return table_steps(cfg["values"], cfg["tail"])
    raise UsageError(f"unknown schedule kind {kind!r}")
