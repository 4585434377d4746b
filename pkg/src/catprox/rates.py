"""Exact evaluation of the certified convergence and metastability moduli.

Everything here runs in arbitrary-precision integer (and exact rational)
arithmetic: the metastability certificate iterates a beta-of-chi
composition up to alpha(4k+3) times and overflows fixed-width integers
already for small k.

The moduli, for a starting-distance bound b, divergence rate theta,
step bound L, quadratic uniform-convexity coefficient c, and modulus of
total boundedness alpha:

* ``beta(k)``      index from which f(x_n) is within 1/(k+1) of inf f:
                   theta^M(ceil(b^2 (k+1) / 2)) + 1.
* ``psi(k)``       2 (k+1)^2 - 1; a psi(k)-approximate minimizer of
                   gamma*f is a k-approximate fixed point of the proximal map.
* ``sigma(k)``     convergence rate of the iterates under uniform
                   convexity: beta(ceil(8 / (c / (k+1)^2))).
* ``chi(n, m, r)`` uniform Fejer modulus 2 L(n+m-1) (m(r+1)+1)^2 - 1.
* ``chi_g_max``    max_{i <= n} chi(i, g(i), r) for a counter function g.
* ``psi_meta(k,g)``     metastability certificate: iterate
                        n -> beta(chi_g_max(n, 4k+3)) alpha(4k+3) times from 0.
* ``omega(k, g)``  certificate locating a window that also pins f near its
                   infimum: psi_meta(k, g_l) + l with l = beta(k) and
                   g_l(n) = g^M(n + l) + l.

``theta``, ``L`` and ``alpha`` are assumed nondecreasing (true for every
built-in construction; the property suites sample-check it), so their
monotone envelopes coincide with themselves.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import BudgetExceededError, ScanBudgetError, UsageError
from .schedule import StepSchedule, as_fraction

DEFAULT_DIGIT_CAP = 100_000
DEFAULT_SCAN_CAP = 1_000_000

# bits per decimal digit, rounded up: used to convert the digit cap.
_BITS_PER_DIGIT = 3.3219280948873626


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _check_digits(value: int, digit_cap: int, context: str) -> int:
    if value.bit_length() > digit_cap * _BITS_PER_DIGIT:
        raise BudgetExceededError(
            f"{context} exceeds the digit cap of {digit_cap}",
            stage=context,
            digits=len(str(value)) if value.bit_length() < 4_000_000 else None)
    return value


# -- counter functions -------------------------------------------------------


@dataclass(frozen=True)
class CounterFunction:
    """A closed-form N -> N function: constant, affine, or finite table.

    The closed forms keep the downstream max- and shift-constructions
    computable at astronomically large arguments.
    """

    kind: str
    a: int = 0           # affine slope
    b: int = 0           # affine intercept / constant value
    values: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self):
        if self.kind not in ("constant", "affine", "table"):
            raise UsageError(f"unknown counter-function kind {self.kind!r}")
        if self.kind == "affine" and self.a < 0:
            raise UsageError("affine counter functions need slope >= 0")
        if min((self.a, self.b, self.tail, *self.values)) < 0:
            raise UsageError("counter functions take values in the naturals")

    def __call__(self, n: int) -> int:
        if n < 0:
            raise UsageError("counter functions are defined on the naturals")
        if self.kind == "constant":
            return self.b
        if self.kind == "affine":
            return self.a * n + self.b
        return self.values[n] if n < len(self.values) else self.tail

    @property
    def is_nondecreasing(self) -> bool:
        if self.kind in ("constant", "affine"):
            return True
        seq = [*self.values, self.tail]
        return all(x <= y for x, y in zip(seq, seq[1:]))

    def monotone_envelope(self) -> "CounterFunction":
        """n -> max_{i <= n} g(i), again in closed form."""
        if self.kind in ("constant", "affine"):
            return self
        run, out = 0, []
        for v in self.values:
            run = max(run, v)
            out.append(run)
        return CounterFunction("table", values=tuple(out),
                               tail=max(run, self.tail))

    def shifted(self, offset: int) -> "CounterFunction":
        """The function n -> g^M(n + offset) + offset."""
        if offset < 0:
            raise UsageError("shift offset must be a natural number")
        g = self.monotone_envelope()
        if g.kind == "constant":
            return CounterFunction("constant", b=g.b + offset)
        if g.kind == "affine":
            return CounterFunction("affine", a=g.a,
                                   b=g.a * offset + g.b + offset)
        vals = tuple(v + offset for v in g.values[offset:])
        return CounterFunction("table", values=vals, tail=g.tail + offset)

    def describe(self) -> str:
        if self.kind == "constant":
            return f"g == {self.b}"
        if self.kind == "affine":
            return f"g(n) = {self.a} n + {self.b}"
        return f"g table {list(self.values)} tail {self.tail}"

    def to_config(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.b}
        if self.kind == "affine":
            return {"kind": "affine", "a": self.a, "b": self.b}
        return {"kind": "table", "values": list(self.values),
                "tail": self.tail}


def constant_counter(value: int) -> CounterFunction:
    return CounterFunction("constant", b=int(value))


def affine_counter(a: int, b: int) -> CounterFunction:
    return CounterFunction("affine", a=int(a), b=int(b))


def table_counter(values, tail: int) -> CounterFunction:
    return CounterFunction("table", values=tuple(int(v) for v in values),
                           tail=int(tail))


def counter_from_config(cfg: dict) -> CounterFunction:
    kind = cfg.get("kind")
    if kind == "constant":
        return constant_counter(cfg["value"])
    if kind == "affine":
        return affine_counter(cfg["a"], cfg["b"])
    if kind == "table":
        return table_counter(cfg["values"], cfg["tail"])
    raise UsageError(f"unknown counter-function kind {kind!r}")


def monotone_envelope(g: CounterFunction) -> CounterFunction:
    return g.monotone_envelope()


# -- rate inputs --------------------------------------------------------------


@dataclass(frozen=True)
class RateInputs:
    """Everything the moduli need, in exact form.

    ``theta`` maps naturals to naturals and is assumed nondecreasing;
    ``L`` must accept -1 (where it returns L(0)); ``alpha`` is the
    modulus of total boundedness of the space when it has one.
    """

    b: Fraction
    theta: Callable[[int], int]
    L: Callable[[int], int] | None = None
    phi_coeff: Fraction | None = None
    alpha: Callable[[int], int] | None = None
    digit_cap: int = DEFAULT_DIGIT_CAP
    scan_cap: int = DEFAULT_SCAN_CAP

    def __post_init__(self):
        if self.b <= 0:
            raise UsageError("the distance bound b must be positive")
        if self.phi_coeff is not None and self.phi_coeff <= 0:
            raise UsageError("the uniform convexity coefficient must be positive")

    @classmethod
    def from_parts(cls, b, sched: StepSchedule, phi_coeff=None,
                   alpha: Callable[[int], int] | None = None,
                   digit_cap: int = DEFAULT_DIGIT_CAP,
                   scan_cap: int = DEFAULT_SCAN_CAP) -> "RateInputs":
        return cls(b=as_fraction(b),
                   theta=lambda P: sched.theta(P, digit_cap=digit_cap),
                   L=sched.L_int,
                   phi_coeff=None if phi_coeff is None else as_fraction(phi_coeff),
                   alpha=alpha, digit_cap=digit_cap, scan_cap=scan_cap)

    def with_digit_cap(self, digit_cap: int) -> "RateInputs":
        return dataclasses.replace(self, digit_cap=digit_cap)


# -- the moduli ----------------------------------------------------------------


def beta(inputs: RateInputs, k: int) -> int:
    """Index from which the objective values are within 1/(k+1) of the infimum."""
    if k < 0:
        raise UsageError("k must be a natural number")
    arg = _ceil_frac(inputs.b * inputs.b * (k + 1) / 2)
    value = inputs.theta(arg) + 1
    return _check_digits(value, inputs.digit_cap, f"beta({k})")


def psi(k: int) -> int:
    """Approximation strength needed to transfer near-minimality to near-fixedness."""
    if k < 0:
        raise UsageError("k must be a natural number")
    return 2 * (k + 1) ** 2 - 1


def sigma(inputs: RateInputs, k: int) -> int:
    """Convergence-rate certificate for the iterates under uniform convexity."""
    if k < 0:
        raise UsageError("k must be a natural number")
    if inputs.phi_coeff is None:
        raise UsageError("sigma requires a uniform convexity modulus")
    phi_val = inputs.phi_coeff / (k + 1) ** 2
    if phi_val <= 0:
        raise UsageError("modulus not admissible: vanishing value")
    return beta(inputs, _ceil_frac(8 / phi_val))


def _L_at(inputs: RateInputs, j: int) -> int:
    if inputs.L is None:
        raise UsageError("chi requires a step bound L")
    return inputs.L(j) if j >= -1 else inputs.L(-1)


def chi(inputs: RateInputs, n: int, m: int, r: int) -> int:
    """Uniform Fejer modulus: 2 L(n+m-1) (m(r+1)+1)^2 - 1."""
    if min(n, m, r) < 0:
        raise UsageError("chi arguments must be natural numbers")
    value = 2 * _L_at(inputs, n + m - 1) * (m * (r + 1) + 1) ** 2 - 1
    return _check_digits(value, inputs.digit_cap, f"chi({n},{m},{r})")


def chi_g_max(inputs: RateInputs, g: CounterFunction, n: int, r: int) -> int:
    """max_{i <= n} chi(i, g(i), r).

    For nondecreasing g (with nondecreasing L) the maximand is itself
    nondecreasing, so the value at i = n suffices; otherwise an explicit
    scan runs, bounded by the scan cap.
    """
    if g.is_nondecreasing:
        return chi(inputs, n, g(n), r)
    if n > inputs.scan_cap:
        raise ScanBudgetError(
            f"non-monotone g with huge argument: scan over {n + 1} indices "
            f"exceeds the cap of {inputs.scan_cap}")
    return max(chi(inputs, i, g(i), r) for i in range(n + 1))


def psi_meta(inputs: RateInputs, k: int, g: CounterFunction) -> int:
    """Metastability certificate: some window [N, N + g(N)] with N below it
    is 1/(k+1)-clustered.

    Iterates n -> beta(chi_g_max(n, 4k+3)) exactly alpha(4k+3) times
    starting from 0.
    """
    if k < 0:
        raise UsageError("k must be a natural number")
    if inputs.alpha is None:
        raise UsageError("psi_meta requires a modulus of total boundedness")
    depth = inputs.alpha(4 * k + 3)
    n = 0
    for stage in range(depth):
        r = chi_g_max(inputs, g, n, 4 * k + 3)
        try:
            n = beta(inputs, r)
        except BudgetExceededError as exc:
            raise BudgetExceededError(
                f"metastability certificate exceeded the digit cap at "
                f"recursion stage {stage + 1} of {depth}",
                stage=stage + 1, digits=exc.digits) from exc
        _check_digits(n, inputs.digit_cap, f"psi_meta stage {stage + 1}")
    return n


def omega(inputs: RateInputs, k: int, g: CounterFunction) -> int:
    """Certificate for a clustered window from which f stays near its infimum.

    Built-in moduli of total boundedness are nondecreasing, so the
    monotone-envelope variant of psi_meta coincides with psi_meta itself.
    """
    offset = beta(inputs, k)
    return psi_meta(inputs, k, g.shifted(offset)) + offset
