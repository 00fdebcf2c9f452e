"""Fractional-part sequence experiments.

* ``alpha = sum 2**-Delta_i`` with ``Delta_1 = 1``, ``Delta_{i+1} = 2**Delta_i + Delta_i``,
  and the exact check that ``{2**n * n * alpha} < 1/2``. For ``n <= Delta_i`` the
  truncation to ``i`` terms decides the inequality, so dyadic arithmetic suffices.
* Dynamic intervals ``I(n) = union_j (I + j) / p**k(n)`` and their hit counters.
* The Mahler sequence ``{(3/2)**n}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from .errors import CapExceededError, PrecisionOverflow, RangeExceedsDelta
from .exactnum import as_rational
from .pam import Interval, PamMap, step

MAX_ALPHA_INDEX = 4
DEFAULT_MAHLER_CAP = 100_000


@dataclass(frozen=True)
class DyadicRational:
    """``mantissa / 2**exponent`` with an odd mantissa (or zero over 2**0)."""

    mantissa: int
    exponent: int

    def __post_init__(self):
        m, e = self.mantissa, self.exponent
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        if m == 0:
            e = 0
        else:
            shift = min(e, (m & -m).bit_length() - 1)
            m >>= shift
            e -= shift
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        e = max(self.exponent, other.exponent)
        return DyadicRational(
            (self.mantissa << (e - self.exponent)) + (other.mantissa << (e - other.exponent)), e
        )

    def scale(self, k: int, shift: int = 0) -> "DyadicRational":
        """``k * 2**shift * self``."""
        m, e = self.mantissa * k, self.exponent
        if shift >= e:
            return DyadicRational(m << (shift - e), 0)
        return DyadicRational(m, e - shift)

    def frac(self) -> "DyadicRational":
        return DyadicRational(self.mantissa & ((1 << self.exponent) - 1), self.exponent)

    def below_half(self) -> bool:
        """``self < 1/2`` for values in [0, 1)."""
        return self.exponent == 0 or self.mantissa < (1 << (self.exponent - 1))

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)


def delta_sequence(i: int) -> list[int]:
    if i < 1:
        raise ValueError("i must be positive")
    if i > MAX_ALPHA_INDEX:
        raise PrecisionOverflow(f"Delta_{i} has about 2**Delta_{i-1} bits; refusing i > {MAX_ALPHA_INDEX}")
    deltas = [1]
    while len(deltas) < i:
        deltas.append(2 ** deltas[-1] + deltas[-1])
    return deltas


def alpha_partial(i: int) -> tuple[DyadicRational, list[int]]:
    """``sum_{j<=i} 2**-Delta_j`` exactly, with the Delta list."""
    deltas = delta_sequence(i)
    top = deltas[-1]
    mantissa = sum(1 << (top - d) for d in deltas)
    return DyadicRational(mantissa, top), deltas


@dataclass(frozen=True)
class ScanRow:
    n: int
    value: DyadicRational
    passes: bool


def theorem5_scan(n_max: int, i: int = MAX_ALPHA_INDEX) -> list[ScanRow]:
    """``{2**n * n * alpha_i}`` and whether it is below 1/2, for ``0 <= n <= n_max``."""
    alpha, deltas = alpha_partial(i)
    if n_max > deltas[-1]:
        raise RangeExceedsDelta(f"n_max={n_max} exceeds Delta_{i}={deltas[-1]}; truncation would be invalid")
    rows = []
    for n in range(n_max + 1):
        v = alpha.scale(n, n).frac()
        rows.append(ScanRow(n, v, v.below_half()))
    return rows


# shift schedules: k(n) for n >= 1
Schedule = Callable[[int], int]


def schedule(kind: Union[str, int, Sequence[int]]) -> Schedule:
    """``"n"``, ``"n-1"``, an int constant, or an explicit list ``[k(1), k(2), ...]``."""
    if kind == "n":
        return lambda n: n
    if kind == "n-1":
        return lambda n: n - 1
    if isinstance(kind, int):
        return lambda n: kind
    if isinstance(kind, str):
        raise ValueError(f"unknown schedule {kind!r}")
    ks = list(kind)
    if any(a > b for a, b in zip(ks, ks[1:])) or (ks and ks[0] < 0):
        raise ValueError("custom schedules must be nonnegative and nondecreasing")
    return lambda n: ks[n - 1]


@dataclass(frozen=True)
class DynamicInterval:
    base: Interval
    p: int
    k: Schedule

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if not (0 <= self.base.left and self.base.right <= 1):
            raise ValueError("the base interval must lie in [0, 1)")

    def contains(self, n: int, x: Fraction) -> bool:
        """Is ``x`` in one of the shrunken copies ``(I + j) / p**k(n)``?

        Locates the candidate copies directly from the copy endpoints rather
        than through a fractional part.
        """
        q = self.p ** self.k(n)
        xq = x * q
        # (l + j)/q <= x < (r + j)/q  <=>  xq - r < j <= xq - l
        j_lo = math.floor(xq - self.base.right) + 1
        j_hi = math.floor(xq - self.base.left)
        for j in range(max(j_lo, 0), min(j_hi, q - 1) + 1):
            if (self.base.left + j) / q <= x < (self.base.right + j) / q:
                return True
        return False

    def pieces(self, n: int) -> list[Interval]:
        q = self.p ** self.k(n)
        return [Interval((self.base.left + j) / q, (self.base.right + j) / q) for j in range(q)]

    def total_length(self, n: int) -> Fraction:
        return sum((iv.length for iv in self.pieces(n)), Fraction(0))


@dataclass(frozen=True)
class HitReport:
    n: int
    F_dynamic: int
    F_static_on_shifted: int

    @property
    def equal(self) -> bool:
        return self.F_dynamic == self.F_static_on_shifted


def frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def dynamic_hit_frequency(x_seq, interval: DynamicInterval, n: int) -> HitReport:
    """Count hits of ``x(i)`` in ``I(i)`` and of ``{p**k(i) x(i)}`` in ``I`` for ``i = 1..n``.

    ``x_seq`` is an iterable yielding ``x(1), x(2), ...`` in [0, 1).
    """
    it = iter(x_seq)
    dyn = static = 0
    for i in range(1, n + 1):
        x = as_rational(next(it))
        dyn += interval.contains(i, x)
        static += frac(interval.p ** interval.k(i) * x) in interval.base
    return HitReport(n, dyn, static)


# generators of x(1), x(2), ...
def multiples(theta) -> Iterator[Fraction]:
    """``{n * theta}`` for n = 1, 2, ..."""
    theta = as_rational(theta)
    n = 1
    while True:
        yield frac(n * theta)
        n += 1


def pam_orbit(f: PamMap, x0, *, skip_start: bool = False) -> Iterator[Fraction]:
    x = as_rational(x0)
    if not skip_start:
        yield x
    while True:
        x, _ = step(f, x)
        yield x


def beta_fractional_orbit(beta, x0) -> Iterator[Fraction]:
    """``x(1) = x0``, ``x(n+1) = {beta * x(n)}``."""
    beta, x = as_rational(beta), frac(as_rational(x0))
    while True:
        yield x
        x = frac(beta * x)


def mahler_fraction(n: int, cap: int = DEFAULT_MAHLER_CAP) -> Fraction:
    """``{(3/2)**n}`` as ``(3**n mod 2**n) / 2**n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the cap {cap}")
    return Fraction(3**n % (1 << n), 1 << n)


def mahler_sequence(n_max: int, cap: int = DEFAULT_MAHLER_CAP) -> list[Fraction]:
    if n_max > cap:
        raise CapExceededError(f"n={n_max} exceeds the cap {cap}")
    out, pow3 = [], 1
    for n in range(1, n_max + 1):
        pow3 *= 3
        out.append(Fraction(pow3 % (1 << n), 1 << n))
    return out


def mahler_stream(cap: int = DEFAULT_MAHLER_CAP) -> Iterator[Fraction]:
    pow3 = 1
    for n in range(1, cap + 1):
        pow3 *= 3
        yield Fraction(pow3 % (1 << n), 1 << n)


def star_discrepancy(points: Sequence[Fraction], k: int = 6) -> Fraction:
    """Max over dyadic cut points ``c = j/2**k`` of ``|#{x < c}/N - c|``.

    A coarse, exact readout of how far a finite sample is from uniform.
    """
    if not points:
        return Fraction(0)
    pts = sorted(points)
    N = len(pts)
    worst = Fraction(0)
    idx = 0
    for j in range(1, 2**k + 1):
        c = Fraction(j, 2**k)
        while idx < N and pts[idx] < c:
            idx += 1
        worst = max(worst, abs(Fraction(idx, N) - c))
    return worst


def first_failure(rows: Sequence[ScanRow]) -> Optional[int]:
    return next((r.n for r in rows if not r.passes), None)
