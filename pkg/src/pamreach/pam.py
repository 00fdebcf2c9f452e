"""Piecewise affine maps over the rationals.

Every interval is half-open, ``[left, right)``, so a breakpoint always belongs
to the piece on its right. A :class:`PamMap` is deterministic when its pieces
partition the domain; otherwise a point may lie in several pieces and
:func:`evaluate` returns every image.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import NotDeterministic, PointInCoverageGap, PointOutsideDomain
from .exactnum import as_rational


@dataclass(frozen=True)
class Interval:
    left: Fraction
    right: Fraction

    def __post_init__(self):
        left, right = as_rational(self.left), as_rational(self.right)
        if not left < right:
            raise ValueError(f"empty interval [{left}, {right})")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __contains__(self, x) -> bool:
        return self.left <= x < self.right

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def intersects(self, other: "Interval") -> bool:
        return max(self.left, other.left) < min(self.right, other.right)

    def contains_interval(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def __str__(self):
        return f"[{self.left}, {self.right})"


@dataclass(frozen=True)
class AffinePiece:
    domain: Interval
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))

    def __call__(self, x: Fraction) -> Fraction:
        return self.a * x + self.b

    def image(self) -> "ImageSet":
        lo, hi = self(self.domain.left), self(self.domain.right)
        if self.a > 0:
            return ImageSet(lo, hi, True, False)
        if self.a < 0:
            return ImageSet(hi, lo, False, True)
        return ImageSet(lo, lo, True, True)


@dataclass(frozen=True)
class ImageSet:
    """Image of a half-open piece; a negative slope flips which end is closed."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def intersects(self, other: "ImageSet") -> bool:
        if self.lo > other.lo or (self.lo == other.lo and not self.lo_closed):
            first, second = other, self
        else:
            first, second = self, other
        if second.lo < first.hi:
            return True
        return second.lo == first.hi and second.lo_closed and first.hi_closed

    def within(self, dom: Interval) -> bool:
        return self.lo >= dom.left and (self.hi < dom.right or (self.hi == dom.right and not self.hi_closed))


@dataclass(frozen=True)
class PamMap:
    domain: Interval
    pieces: tuple[AffinePiece, ...]
    deterministic: bool = True
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @classmethod
    def from_rows(cls, domain, rows, deterministic=True, label=""):
        """Build from ``(left, right, a, b)`` tuples of ints/strings/Fractions."""
        pieces = [AffinePiece(Interval(l, r), a, b) for l, r, a, b in rows]
        return cls(Interval(*domain), tuple(pieces), deterministic, label)

    @property
    def slopes(self) -> list[Fraction]:
        return [p.a for p in self.pieces]

    @property
    def offsets(self) -> list[Fraction]:
        return [p.b for p in self.pieces]

    def breakpoints(self) -> list[Fraction]:
        pts = {self.domain.left, self.domain.right}
        for p in self.pieces:
            pts.update((p.domain.left, p.domain.right))
        return sorted(pts)

    def coefficients(self) -> list[Fraction]:
        """Every rational the map is built from (endpoints, slopes, offsets)."""
        return self.breakpoints() + self.slopes + self.offsets


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(f: PamMap) -> ValidationReport:
    report = ValidationReport()
    out = report.violations
    if not f.pieces:
        out.append("map has no pieces")
        return report
    for i, p in enumerate(f.pieces):
        if not f.domain.contains_interval(p.domain):
            out.append(f"piece {i}: {p.domain} not inside domain {f.domain}")
        if not p.image().within(f.domain):
            img = p.image()
            out.append(f"piece {i}: image [{img.lo}, {img.hi}] escapes domain {f.domain}")
    if f.deterministic:
        for i in range(len(f.pieces)):
            for j in range(i + 1, len(f.pieces)):
                if f.pieces[i].domain.intersects(f.pieces[j].domain):
                    out.append(f"pieces {i} and {j} overlap: {f.pieces[i].domain} and {f.pieces[j].domain}")
    for lo, hi in _gaps(f):
        out.append(f"coverage gap [{lo}, {hi})")
    return report


def _gaps(f: PamMap) -> list[tuple[Fraction, Fraction]]:
    gaps = []
    cursor = f.domain.left
    for d in sorted((p.domain for p in f.pieces), key=lambda d: d.left):
        if d.left > cursor:
            gaps.append((cursor, min(d.left, f.domain.right)))
        cursor = max(cursor, d.right)
    if cursor < f.domain.right:
        gaps.append((cursor, f.domain.right))
    return gaps


def evaluate(f: PamMap, x) -> tuple[Fraction, ...]:
    """All images of ``x``: a 1-tuple for deterministic maps."""
    x = as_rational(x)
    if x not in f.domain:
        raise PointOutsideDomain(f"{x} is outside {f.domain}")
    if f.deterministic:
        return (step(f, x)[0],)
    images = []
    for p in f.pieces:
        if x in p.domain:
            y = p(x)
            if y not in images:
                images.append(y)
    if not images:
        raise PointInCoverageGap(f"no piece contains {x}")
    return tuple(images)


def piece_index(f: PamMap, x: Fraction) -> int:
    for i, p in enumerate(f.pieces):
        if x in p.domain:
            return i
    if x not in f.domain:
        raise PointOutsideDomain(f"{x} is outside {f.domain}")
    raise PointInCoverageGap(f"no piece contains {x}")


def step(f: PamMap, x: Fraction) -> tuple[Fraction, int]:
    """One deterministic step: the image and the index of the piece used."""
    i = piece_index(f, x)
    return f.pieces[i](x), i


# orbit verdicts
@dataclass(frozen=True)
class Hit:
    step: int


@dataclass(frozen=True)
class Cycle:
    preperiod: int
    period: int


@dataclass(frozen=True)
class CapExceeded:
    pass


Verdict = Union[Hit, Cycle, CapExceeded]


@dataclass
class OrbitRecord:
    points: list[Fraction]
    piece_trace: list[int]
    verdict: Verdict

    def replay(self, f: PamMap) -> bool:
        """Re-run every recorded step and compare exactly."""
        for i, j in enumerate(self.piece_trace):
            p = f.pieces[j]
            if self.points[i] not in p.domain or p(self.points[i]) != self.points[i + 1]:
                return False
        return True

    def cycle_points(self) -> list[Fraction]:
        if not isinstance(self.verdict, Cycle):
            return []
        s, t = self.verdict.preperiod, self.verdict.period
        return self.points[s : s + t]


def iterate_orbit(
    f: PamMap,
    x0,
    cap: int,
    target=None,
    *,
    require_positive: bool = False,
    stop=None,
) -> OrbitRecord:
    """Iterate ``f`` exactly from ``x0`` for at most ``cap`` steps.

    Stops at the first hit of ``target`` (step 0 counts unless
    ``require_positive``), at the first exact repeat, or at the cap.
    ``stop(i, x)`` may end the run early by returning a truthy value; the
    verdict is then ``CapExceeded`` and the caller interprets it.
    """
    if not f.deterministic:
        raise NotDeterministic("orbits are defined for deterministic maps only")
    if cap < 1:
        raise ValueError("cap must be positive")
    x = as_rational(x0)
    target = None if target is None else as_rational(target)
    if x not in f.domain:
        raise PointOutsideDomain(f"{x} is outside {f.domain}")
    points = [x]
    trace: list[int] = []
    seen: dict[Fraction, int] = {}
    i = 0
    while True:
        if target is not None and x == target and (i > 0 or not require_positive):
            return OrbitRecord(points, trace, Hit(i))
        if x in seen:
            s = seen[x]
            return OrbitRecord(points, trace, Cycle(s, i - s))
        seen[x] = i
        if i >= cap or (stop is not None and stop(i, x)):
            return OrbitRecord(points, trace, CapExceeded())
        x, j = step(f, x)
        points.append(x)
        trace.append(j)
        i += 1


def explore(f: PamMap, x0, depth: int, frontier_cap: int = 10**5, target=None):
    """Breadth-first reachable set of a (possibly nondeterministic) map.

    Returns ``(levels, found)`` where ``levels[n]`` is the set of points first
    seen at distance ``n`` and ``found`` is the distance of ``target`` or None.
    Raises ``OverflowError`` when a frontier outgrows ``frontier_cap``.
    """
    x0 = as_rational(x0)
    target = None if target is None else as_rational(target)
    visited = {x0}
    levels = [{x0}]
    if target == x0:
        return levels, 0
    queue = deque([x0])
    for n in range(1, depth + 1):
        nxt = set()
        for _ in range(len(queue)):
            x = queue.popleft()
            for y in evaluate(f, x):
                if y not in visited:
                    visited.add(y)
                    nxt.add(y)
                    queue.append(y)
        if len(nxt) > frontier_cap:
            raise OverflowError(f"frontier of size {len(nxt)} at depth {n}")
        levels.append(nxt)
        if target is not None and target in nxt:
            return levels, n
        if not nxt:
            break
    return levels, None


@dataclass
class StructureReport:
    """Structural flags; circle notions are ``None`` unless the domain is [0, 1)."""

    injective: bool
    complete: Optional[bool]
    continuous_on_circle: Optional[bool]
    degree: Optional[Fraction]
    slopes: list[Fraction]
    zero_slopes: list[int]


def structure_report(f: PamMap) -> StructureReport:
    slopes = f.slopes
    zero = [i for i, a in enumerate(slopes) if a == 0]
    images = [p.image() for p in f.pieces]
    injective = not zero and not any(
        images[i].intersects(images[j]) for i in range(len(images)) for j in range(i + 1, len(images))
    )
    if f.domain != Interval(0, 1):
        return StructureReport(injective, None, None, None, slopes, zero)
    complete = all(img.lo == 0 and img.hi == 1 for img in images)
    continuous, degree = _circle_lift(f)
    return StructureReport(injective, complete, continuous, degree, slopes, zero)


def _circle_lift(f: PamMap):
    if not f.deterministic or _gaps(f):
        return False, None
    pieces = sorted(f.pieces, key=lambda p: p.domain.left)
    shift = Fraction(0)
    for cur, nxt in zip(pieces, pieces[1:]):
        jump = cur(cur.domain.right) - nxt(nxt.domain.left)
        if jump.denominator != 1:
            return False, None
        shift += jump
    lift_end = pieces[-1](Fraction(1)) + shift
    lift_start = pieces[0](Fraction(0))
    degree = lift_end - lift_start
    if degree.denominator != 1:
        return False, None
    return True, degree


def conjugate(f: PamMap, u, v) -> PamMap:
    """Conjugate by ``h(x) = u*x + v``: returns ``h . f . h^-1``.

    With ``u < 0`` the image intervals are re-closed on the left (so the
    endpoints shift by one point) and the piece order is reversed, which keeps
    the round trip exact.
    """
    u, v = as_rational(u), as_rational(v)
    if u == 0:
        raise ValueError("h must be a bijection (u != 0)")

    def move(d: Interval) -> Interval:
        a, b = u * d.left + v, u * d.right + v
        return Interval(min(a, b), max(a, b))

    pieces = [AffinePiece(move(p.domain), p.a, u * p.b + v * (1 - p.a)) for p in f.pieces]
    if u < 0:
        pieces.reverse()
    return PamMap(move(f.domain), tuple(pieces), f.deterministic, f.label)


def normalize(f: PamMap) -> tuple[PamMap, tuple[Fraction, Fraction]]:
    """Rescale the domain to [0, 1); returns the map and ``(u, v)`` of ``h``."""
    width = f.domain.length
    u, v = 1 / width, -f.domain.left / width
    return conjugate(f, u, v), (u, v)


def doubling_map() -> PamMap:
    return PamMap.from_rows((0, 1), [(0, "1/2", 2, 0), ("1/2", 1, 2, -1)], label="doubling")


def rotation_map(shift="1/2") -> PamMap:
    s = as_rational(shift)
    return PamMap.from_rows((0, 1), [(0, 1 - s, 1, s), (1 - s, 1, 1, s - 1)], label=f"rotation by {s}")


def three_halves_map() -> PamMap:
    """Complete degree-2 map: (3/2)x on [0, 2/3), 3x - 2 on [2/3, 1)."""
    return PamMap.from_rows((0, 1), [(0, "2/3", "3/2", 0), ("2/3", 1, 3, -2)], label="3/2-map")

