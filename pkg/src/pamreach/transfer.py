"""Exact Perron-Frobenius operator on piecewise-constant densities.

Pushing a step density through an affine piece gives another step density:
the mass on ``[s, t)`` lands on ``a*[s, t) + b`` with height divided by
``|a|``. Summing over pieces keeps everything rational, so iterates are
exact; the price is that breakpoints multiply, which ``merge_cap`` bounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import NotDeterministic, SlopeZero
from .exactnum import as_rational
from .pam import Interval, OrbitRecord, PamMap


@dataclass(frozen=True)
class StepDensity:
    """Value ``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``, zero elsewhere."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(as_rational(b) for b in self.breakpoints)
        vals = tuple(as_rational(v) for v in self.values)
        if len(bps) != len(vals) + 1:
            raise ValueError("need exactly one value per gap")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly ascending")
        if any(v < 0 for v in vals):
            raise ValueError("density values must be nonnegative")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, domain: Interval) -> "StepDensity":
        return cls((domain.left, domain.right), (1 / domain.length,))

    @classmethod
    def constant(cls, domain: Interval, value) -> "StepDensity":
        return cls((domain.left, domain.right), (as_rational(value),))

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        bps = self.breakpoints
        if not bps[0] <= x < bps[-1]:
            return Fraction(0)
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if bps[mid] <= x:
                lo = mid
            else:
                hi = mid
        return self.values[lo]

    def gaps(self):
        return zip(self.breakpoints, self.breakpoints[1:], self.values)

    def mass(self) -> Fraction:
        return sum(((t - s) * v for s, t, v in self.gaps()), Fraction(0))

    def merged(self) -> "StepDensity":
        """Drop breakpoints between equal values."""
        bps = [self.breakpoints[0]]
        vals: list[Fraction] = []
        for s, t, v in self.gaps():
            if vals and vals[-1] == v:
                bps[-1] = t
            else:
                vals.append(v)
                bps.append(t)
        return StepDensity(tuple(bps), tuple(vals))

    def extrema(self, support: Optional[Interval] = None) -> tuple[Fraction, Fraction]:
        """(min, max) over gaps inside ``support`` (default: the whole breakpoint range)."""
        d = self.merged()
        vals = [v for s, t, v in d.gaps() if support is None or (s >= support.left and t <= support.right)]
        if support is not None:
            covered = sum((t - s for s, t, _ in d.gaps() if s >= support.left and t <= support.right), Fraction(0))
            if covered < support.length:
                vals.append(Fraction(0))
        return min(vals), max(vals)


def _accumulate(events: Iterable[tuple[Fraction, Fraction]], lo: Fraction, hi: Fraction) -> StepDensity:
    """Sum of indicator steps given as (position, delta) events, on ``[lo, hi)``."""
    deltas: dict[Fraction, Fraction] = {lo: Fraction(0), hi: Fraction(0)}
    for pos, dv in events:
        deltas[pos] = deltas.get(pos, Fraction(0)) + dv
    keys = sorted(deltas)
    bps, vals = [], []
    level = Fraction(0)
    for a, b in zip(keys, keys[1:]):
        level += deltas[a]
        if a >= lo and b <= hi:
            bps.append(a)
            vals.append(level)
    bps.append(hi)
    return StepDensity(tuple(bps), tuple(vals)).merged()


def transfer_once(f: PamMap, phi: StepDensity) -> StepDensity:
    """One application of ``L_f``: ``(L phi)(x) = sum phi(y)/|f'(y)|`` over preimages ``y``."""
    if not f.deterministic:
        raise NotDeterministic("the transfer operator needs a deterministic map")
    for i, piece in enumerate(f.pieces):
        if piece.a == 0:
            raise SlopeZero(f"piece {i} has slope 0")
    events: list[tuple[Fraction, Fraction]] = []
    lo, hi = f.domain.left, f.domain.right
    for piece in f.pieces:
        scale = 1 / abs(piece.a)
        for s, t, v in phi.gaps():
            s, t = max(s, piece.domain.left), min(t, piece.domain.right)
            if s >= t or v == 0:
                continue
            u, w = piece(s), piece(t)
            if u > w:
                u, w = w, u
            events.append((u, v * scale))
            events.append((w, -v * scale))
            lo, hi = min(lo, u), max(hi, w)
    return _accumulate(events, lo, hi)


def l1_distance(p: StepDensity, q: StepDensity) -> Fraction:
    """Exact integral of ``|p - q|`` over the common refinement."""
    pts = sorted(set(p.breakpoints) | set(q.breakpoints))
    return sum(((b - a) * abs(p(a) - q(a)) for a, b in zip(pts, pts[1:])), Fraction(0))


@dataclass
class TransferRun:
    phi_n: StepDensity
    distances: list[Fraction]
    steps_done: int
    stopped_early: bool = False
    history: list[StepDensity] = field(default_factory=list)


def iterate_transfer(f: PamMap, phi0: StepDensity, steps: int, merge_cap: int = 10**5, keep_history: bool = False) -> TransferRun:
    phi = phi0.merged()
    distances = []
    history = [phi] if keep_history else []
    for n in range(steps):
        nxt = transfer_once(f, phi)
        distances.append(l1_distance(nxt, phi))
        phi = nxt
        if keep_history:
            history.append(phi)
        if len(phi.breakpoints) > merge_cap:
            return TransferRun(phi, distances, n + 1, True, history)
    return TransferRun(phi, distances, steps, False, history)


def density_bounds(phi: StepDensity, domain: Interval) -> tuple[Fraction, Fraction]:
    """Candidate (Kmin, Kmax) read off a density. An estimate, not a proof."""
    return phi.extrema(domain)


@dataclass
class EmpiricalDistribution:
    bins: list[Interval]
    counts: list[int]
    n: int

    @property
    def frequencies(self) -> list[Fraction]:
        return [Fraction(c, self.n) if self.n else Fraction(0) for c in self.counts]


def hit_counter(points: Sequence[Fraction], interval: Interval) -> list[int]:
    """Running count ``F(n)`` of points among the first ``n+1`` lying in ``interval``."""
    out, c = [], 0
    for x in points:
        c += x in interval
        out.append(c)
    return out


def empirical_histogram(orbit, bins: Sequence[Interval], *, drop_repeat: bool = True) -> EmpiricalDistribution:
    """Exact bin counts over an orbit prefix.

    For an :class:`OrbitRecord` ending in a cycle the closing repeat of the
    cycle start is left out, so a pure cycle is counted once per period.
    """
    if isinstance(orbit, OrbitRecord):
        points = list(orbit.points)
        if drop_repeat and orbit.cycle_points():
            points = points[:-1]
    else:
        points = list(orbit)
    counts = [sum(1 for x in points if x in b) for b in bins]
    return EmpiricalDistribution(list(bins), counts, len(points))


def dyadic_bins(k: int, domain: Interval = Interval(0, 1)) -> list[Interval]:
    w = domain.length / 2**k
    return [Interval(domain.left + i * w, domain.left + (i + 1) * w) for i in range(2**k)]
