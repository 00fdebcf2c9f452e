"""Rational-base expansions as piecewise affine maps.

For a non-integer rational ``beta > 1`` with digits ``D = {0, ..., ceil(beta)-1}``
every point of ``[0, vmax)``, ``vmax = (ceil(beta)-1)/(beta-1)``, has an
expansion ``x = sum d_i beta**-i``. Digit ``d`` is admissible at ``x`` exactly
when ``x`` lies in ``X_d = [d/beta, (vmax+d)/beta)``, and the next point is
``beta*x - d``. Greedy expansions take the largest admissible digit, lazy ones
the smallest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import BaseNotGreaterThanOne, BaseOutOfRange, IntegerBase, PointOutsideDomain
from .exactnum import as_rational
from .pam import AffinePiece, Cycle, Interval, PamMap, iterate_orbit

VARIANTS = ("nondet", "greedy", "lazy")


@dataclass(frozen=True)
class BetaSystem:
    beta: Fraction

    def __post_init__(self):
        beta = as_rational(self.beta)
        if beta <= 1:
            raise BaseNotGreaterThanOne(f"beta must exceed 1, got {beta}")
        if beta.denominator == 1:
            raise IntegerBase(f"beta must not be an integer, got {beta}")
        object.__setattr__(self, "beta", beta)

    @property
    def top_digit(self) -> int:
        return math.ceil(self.beta) - 1

    @property
    def digits(self) -> range:
        return range(self.top_digit + 1)

    @property
    def vmin(self) -> Fraction:
        return Fraction(0)

    @property
    def vmax(self) -> Fraction:
        return Fraction(self.top_digit) / (self.beta - 1)

    @property
    def domain(self) -> Interval:
        return Interval(self.vmin, self.vmax)

    def branch_interval(self, d: int) -> Interval:
        return Interval((self.vmin + d) / self.beta, (self.vmax + d) / self.beta)

    @property
    def branch_intervals(self) -> list[Interval]:
        return [self.branch_interval(d) for d in self.digits]

    def greedy_interval(self, d: int) -> Interval:
        if d == self.top_digit:
            return self.branch_interval(d)
        return Interval(Fraction(d) / self.beta, Fraction(d + 1) / self.beta)

    def lazy_interval(self, d: int) -> Interval:
        if d == 0:
            return self.branch_interval(0)
        return Interval((self.vmax + d - 1) / self.beta, (self.vmax + d) / self.beta)

    def mirror(self, x: Fraction) -> Fraction:
        """The conjugacy ``h(x) = vmax - x``, its own inverse."""
        return self.vmax - x

    def greedy_digit(self, x: Fraction) -> int:
        return min(math.floor(self.beta * x), self.top_digit)

    def lazy_digit(self, x: Fraction, left_limit: bool = False) -> int:
        """Smallest admissible digit; with ``left_limit`` the pieces are ``(l, r]``.

        The left-limit reading is what the mirror of the greedy map sees,
        since ``h`` turns ``[l, r)`` into ``(vmax-r, vmax-l]``.
        """
        # x in X''_d  <=>  (vmax+d-1)/beta <= x  <=>  d <= beta*x - vmax + 1
        t = self.beta * x - self.vmax + 1
        d = math.ceil(t) - 1 if left_limit else math.floor(t)
        return max(0, min(d, self.top_digit))

    def lazy_map_left_limit(self, x: Fraction) -> Fraction:
        """Lazy map on right-closed pieces; defined on ``(0, vmax]``."""
        return self.beta * x - self.lazy_digit(x, left_limit=True)


def build_beta_pam(beta, variant: str = "greedy") -> PamMap:
    system = beta if isinstance(beta, BetaSystem) else BetaSystem(as_rational(beta))
    if variant == "nondet":
        ivs = system.branch_intervals
    elif variant == "greedy":
        ivs = [system.greedy_interval(d) for d in system.digits]
    elif variant == "lazy":
        ivs = [system.lazy_interval(d) for d in system.digits]
    else:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    pieces = tuple(AffinePiece(iv, system.beta, -d) for d, iv in zip(system.digits, ivs))
    return PamMap(system.domain, pieces, variant != "nondet", f"{variant} {system.beta}-expansion")


@dataclass
class DigitSeq:
    digits: list[int]
    orbit: list[Fraction]
    periodic_suffix: Optional[tuple[int, int]] = None

    def digit(self, i: int) -> int:
        """Digit ``i`` (0-based), extended through the periodic tail."""
        if i < len(self.digits):
            return self.digits[i]
        if self.periodic_suffix is None:
            raise IndexError(i)
        s, t = self.periodic_suffix
        return self.digits[s + (i - s) % t]

    def prefix(self, n: int) -> list[int]:
        return [self.digit(i) for i in range(n)]

    def __str__(self):
        if self.periodic_suffix is None:
            return "".join(map(str, self.digits)) + "..."
        s, t = self.periodic_suffix
        head = "".join(map(str, self.digits[:s]))
        return f"{head}({''.join(map(str, self.digits[s:s + t]))})^w"


def digit_stream(system, variant: str, x, depth: int) -> DigitSeq:
    """Digits of the deterministic orbit of ``x`` to ``depth``, with exact period detection."""
    if not isinstance(system, BetaSystem):
        system = BetaSystem(as_rational(system))
    if variant == "nondet":
        raise ValueError("the nondeterministic map has no single digit stream; use explore()")
    x = as_rational(x)
    if x not in system.domain:
        raise PointOutsideDomain(f"{x} is outside {system.domain}")
    f = build_beta_pam(system, variant)
    rec = iterate_orbit(f, x, depth)
    digits = [system.digits[j] for j in rec.piece_trace]
    periodic = None
    if isinstance(rec.verdict, Cycle):
        periodic = (rec.verdict.preperiod, rec.verdict.period)
    return DigitSeq(digits, rec.points[: len(digits)], periodic)


@dataclass(frozen=True)
class PartialValue:
    sum: Fraction
    remainder_bounds: tuple[Fraction, Fraction]


def partial_value(digits: Union[DigitSeq, Iterable[int]], beta, n: int) -> PartialValue:
    beta = as_rational(beta)
    seq = digits.prefix(n) if isinstance(digits, DigitSeq) else list(digits)[:n]
    if len(seq) < n:
        raise ValueError(f"only {len(seq)} digits available, asked for {n}")
    total = Fraction(0)
    for d in reversed(seq):
        total = (total + d) / beta
    system = BetaSystem(beta)
    scale = beta**n
    return PartialValue(total, (system.vmin / scale, system.vmax / scale))


@dataclass(frozen=True)
class TdsAnswer:
    answer: str  # "Yes", "No" or "Unknown"
    witness: Optional[DigitSeq] = None
    refutation_step: Optional[int] = None

    def __str__(self):
        return self.answer


def tds01_decide(beta, x, depth: int = 1000) -> TdsAnswer:
    """Does ``x`` have an expansion in base ``beta`` using only digits 0 and 1?

    A {0,1} expansion must coincide with the greedy one, so a greedy digit of
    2 or more refutes it; a periodic greedy orbit with only 0/1 digits is a
    finite witness. Anything else stays ``Unknown`` at this depth.
    """
    beta, x = as_rational(beta), as_rational(x)
    if beta <= 1 or beta.denominator == 1:
        raise BaseOutOfRange(f"need a non-integer beta > 1, got {beta}")
    system = BetaSystem(beta)
    seq = digit_stream(system, "greedy", x, depth)
    if beta < 2:
        return TdsAnswer("Yes", seq)
    for i, d in enumerate(seq.digits):
        if d >= 2:
            return TdsAnswer("No", seq, i)
    if seq.periodic_suffix is not None:
        return TdsAnswer("Yes", seq)
    return TdsAnswer("Unknown", seq)


def check_greedy_lazy_conjugacy(beta, samples: Iterable) -> bool:
    """``greedy(x) == h(lazy(h(x)))`` exactly for every sample.

    The lazy map is read on right-closed pieces so that breakpoints and the
    endpoint ``h(0) = vmax`` are handled; see :meth:`BetaSystem.lazy_digit`.
    """
    system = beta if isinstance(beta, BetaSystem) else BetaSystem(as_rational(beta))
    greedy = build_beta_pam(system, "greedy")
    for x in samples:
        x = as_rational(x)
        g = greedy.pieces[system.greedy_digit(x)](x)
        if g != system.mirror(system.lazy_map_left_limit(system.mirror(x))):
            return False
    return True
