"""Exact rationals, prime bases and p-adic weights.

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator. The p-adic weight of a nonzero
rational ``x = p**k * r / s`` (``p`` dividing neither ``r`` nor ``s``) is
``-k``: large weights mean many factors of ``p`` in the denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import EnumerationTooLarge, UnfactorableCoefficient, ZeroHasNoWeight

INFINITE = math.inf

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_ENUMERATION_CAP = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as a rational")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24, overwhelming beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ZeroHasNoWeight("0 has no valuation")
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    if n % p:
        return 0
    # divide by p, p^2, p^4, ... then walk back down; O(log v) big divisions
    v = 0
    powers = [p]
    while True:
        q, r = divmod(n, powers[-1])
        if r:
            break
        n = q
        v += 1 << (len(powers) - 1)
        powers.append(powers[-1] * powers[-1])
    for i in range(len(powers) - 2, -1, -1):
        q, r = divmod(n, powers[i])
        if not r:
            n = q
            v += 1 << i
    return v


def factor_integer(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND) -> dict[int, int]:
    """Prime factorisation of ``|n|`` by trial division up to ``trial_bound``.

    A leftover cofactor is accepted only when it tests prime; anything else
    raises :class:`UnfactorableCoefficient`.
    """
    n = abs(n)
    if n == 0:
        raise ZeroHasNoWeight("0 has no factorisation")
    factors: dict[int, int] = {}
    for p in (2, 3):
        if n % p == 0:
            k = valuation(n, p)
            factors[p] = k
            n //= p**k
    d = 5
    while d * d <= n and d <= trial_bound:
        for q in (d, d + 2):
            if n % q == 0:
                k = valuation(n, q)
                factors[q] = k
                n //= q**k
        d += 6
    if n > 1:
        if d * d > n or is_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            raise UnfactorableCoefficient(
                f"cofactor {n} has no factor below {trial_bound} and is composite"
            )
    return factors


@dataclass(frozen=True)
class PrimeBasis:
    """Ascending tuple of distinct primes; ``m`` is their product."""

    primes: tuple[int, ...]

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        if not primes:
            raise ValueError("a prime basis needs at least one prime")
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError(f"primes must be strictly ascending: {primes}")
        bad = [p for p in primes if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        object.__setattr__(self, "primes", primes)

    @classmethod
    def of(cls, *primes: int) -> "PrimeBasis":
        return cls(tuple(sorted(set(primes))))

    @property
    def m(self) -> int:
        return math.prod(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def union(self, primes: Iterable[int]) -> "PrimeBasis":
        return PrimeBasis.of(*self.primes, *primes)


@dataclass(frozen=True)
class WeightVector:
    per_prime: tuple[int, ...]
    m_weight: float | int
    residual: bool


def padic_weight(x, p: int) -> int:
    """Weight ``-alpha_p`` of the nonzero rational ``x`` at the prime ``p``.

    >>> padic_weight(12, 2), padic_weight(Fraction(1, 8), 2)
    (-2, 3)
    """
    x = as_rational(x)
    if x == 0:
        raise ZeroHasNoWeight("the weight of 0 is undefined")
    return valuation(x.denominator, p) - valuation(x.numerator, p)


def _strip(n: int, primes: Iterable[int]) -> int:
    for p in primes:
        if n % p == 0:
            n //= p ** valuation(n, p)
    return n


def m_weight_vector(x, basis: PrimeBasis) -> WeightVector:
    x = as_rational(x)
    if x == 0:
        raise ZeroHasNoWeight("the weight of 0 is undefined")
    per_prime = tuple(padic_weight(x, p) for p in basis.primes)
    residual = _strip(x.denominator, basis.primes) != 1
    return WeightVector(per_prime, INFINITE if residual else max(per_prime), residual)


def m_weight(x, basis: PrimeBasis):
    """``max`` of the basis weights, or ``INFINITE`` when a foreign prime divides the denominator."""
    return m_weight_vector(x, basis).m_weight


def m_weight_or_none(x, basis: PrimeBasis):
    """Like :func:`m_weight` but ``None`` for 0, which sits below every threshold."""
    x = as_rational(x)
    return None if x == 0 else m_weight(x, basis)


def max_weight(values: Iterable, basis: PrimeBasis):
    """Largest m-weight among the nonzero values, ``None`` if all are zero."""
    weights = [w for w in (m_weight_or_none(v, basis) for v in values) if w is not None]
    return max(weights) if weights else None


def prime_support(values: Iterable, trial_bound: int = DEFAULT_TRIAL_BOUND) -> set[int]:
    """All primes dividing a numerator or denominator of the given rationals."""
    primes: set[int] = set()
    for v in values:
        v = as_rational(v)
        if v == 0:
            continue
        primes.update(factor_integer(v.numerator, trial_bound))
        primes.update(factor_integer(v.denominator, trial_bound))
    return primes


def basis_for(values: Iterable, extra: Iterable[int] = (), trial_bound: int = DEFAULT_TRIAL_BOUND) -> PrimeBasis:
    """Smallest basis covering every prime in ``values`` (plus ``extra``).

    Falls back to ``{2}`` when everything is an integer without prime factors.
    """
    primes = prime_support(values, trial_bound) | set(extra)
    return PrimeBasis.of(*(primes or {2}))


def extend_basis(basis: PrimeBasis, x, trial_bound: int = DEFAULT_TRIAL_BOUND) -> PrimeBasis:
    """Add the denominator primes of ``x`` that ``basis`` is missing."""
    x = as_rational(x)
    rest = _strip(x.denominator, basis.primes)
    if rest == 1:
        return basis
    return basis.union(factor_integer(rest, trial_bound))


def weight_lower_bound(a: int, basis: PrimeBasis) -> int:
    """A floor ``b`` on every p-adic weight of rationals in [0, 1] with m-weight < ``a``.

    Uses ``b = -alpha`` with ``alpha`` the largest integer such that
    ``2**alpha <= p_k**(k*a)``; the comparison is done on integers.
    """
    if a < 1:
        raise ValueError("a must be a positive integer")
    k = len(basis)
    return -((basis.primes[-1] ** (k * a)).bit_length() - 1)


def enumerate_bounded_weight(a: int, basis: PrimeBasis, cap: int = DEFAULT_ENUMERATION_CAP) -> set[Fraction]:
    """Every rational in [0, 1] whose m-weight is finite and below ``a`` (0 included)."""
    if a < 1:
        raise ValueError("a must be a positive integer")
    denom = basis.m ** (a - 1)
    if denom > cap:
        raise EnumerationTooLarge(f"m^(a-1) = {denom} exceeds the cap {cap}")
    out = set()
    for j in range(denom + 1):
        x = Fraction(j, denom)
        if x == 0 or m_weight(x, basis) < a:
            out.add(x)
    return out
