"""Point-to-point reachability for PAMs.

Two decision procedures built on p-adic weights, plus plain simulation:

* :func:`decide_reach_weight` needs every row of the slope weight matrix to
  be sign-uniform. Along such an orbit the m-weight of a point, once above a
  threshold, can only grow, so the orbit either hits ``y``, loops, or climbs
  past ``y``'s weight for good.
* :func:`decide_reach_bounded` handles injective two-piece maps given bounds
  ``kmin <= phi <= kmax`` on an invariant density; the bounds cap the weight
  of any point on a path from ``x`` to ``y``, hence the path length.
* :func:`simulate_reach` only semi-decides and serves as the test oracle.

All logarithm inequalities are settled by comparing exact integer powers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import BadDensityBounds, NotInjective, NotTwoPieces, SignConditionViolated, SlopeZero
from .exactnum import PrimeBasis, as_rational, basis_for, m_weight, max_weight, padic_weight
from .pam import Cycle, Hit, OrbitRecord, PamMap, iterate_orbit, structure_report


@dataclass(frozen=True)
class CoeffMatrix:
    """``entries[j][i]`` is the weight of slope ``i`` at prime ``basis.primes[j]``."""

    entries: tuple[tuple[int, ...], ...]
    basis: PrimeBasis
    rank: int

    def row_sign_ok(self) -> bool:
        return all(min(row) >= 0 or max(row) <= 0 for row in self.entries)

    def row_signs(self) -> list[int]:
        """+1 for a nonnegative row, -1 for a nonpositive one, 0 for an all-zero row."""
        out = []
        for row in self.entries:
            if any(row) and max(row) <= 0:
                out.append(-1)
            elif any(row):
                out.append(1)
            else:
                out.append(0)
        return out


def exact_rank(rows) -> int:
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                k = m[r][col] / m[rank][col]
                m[r] = [a - k * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def coeff_matrix_and_signs(f: PamMap, basis: Optional[PrimeBasis] = None) -> tuple[CoeffMatrix, bool]:
    slopes = f.slopes
    for i, a in enumerate(slopes):
        if a == 0:
            raise SlopeZero(f"piece {i} has slope 0")
    work = basis_for(slopes, extra=basis.primes if basis else ())
    entries = tuple(tuple(padic_weight(a, p) for a in slopes) for p in work.primes)
    cm = CoeffMatrix(entries, work, exact_rank(entries))
    return cm, cm.row_sign_ok()


# outcomes
@dataclass(frozen=True)
class Reached:
    step: int

    def __str__(self):
        return f"Reached({self.step})"


@dataclass(frozen=True)
class UnreachableCycle:
    def __str__(self):
        return "UnreachableCycle"


@dataclass(frozen=True)
class UnreachableWeight:
    step: int
    weight: int
    threshold: int

    def __str__(self):
        return "UnreachableWeight"


@dataclass(frozen=True)
class Unknown:
    reason: str

    def __str__(self):
        return f"Unknown({self.reason})"


Outcome = Union[Reached, UnreachableCycle, UnreachableWeight, Unknown]


@dataclass
class ReachVerdict:
    outcome: Outcome
    certificate: OrbitRecord
    decider: str
    conditional: bool = False
    details: dict = field(default_factory=dict)

    @property
    def definite(self) -> bool:
        return not isinstance(self.outcome, Unknown)

    def __str__(self):
        return str(self.outcome)


def _working_basis(f: PamMap, x, y, basis: Optional[PrimeBasis]) -> PrimeBasis:
    return basis_for(f.coefficients() + [x, y], extra=basis.primes if basis else ())


def _from_orbit(rec: OrbitRecord) -> Optional[Outcome]:
    if isinstance(rec.verdict, Hit):
        return Reached(rec.verdict.step)
    if isinstance(rec.verdict, Cycle):
        return UnreachableCycle()
    return None


def simulate_reach(f: PamMap, x, y, cap: int, *, require_positive: bool = False) -> ReachVerdict:
    rec = iterate_orbit(f, x, cap, target=y, require_positive=require_positive)
    outcome = _from_orbit(rec) or Unknown("CapExceeded")
    return ReachVerdict(outcome, rec, "simulate")


def decide_reach_weight(
    f: PamMap,
    x,
    y,
    cap: int = 10**6,
    basis: Optional[PrimeBasis] = None,
    *,
    require_positive: bool = False,
) -> ReachVerdict:
    """Decide ``y in O_f(x)`` for maps whose slope weight rows are sign-uniform.

    The run stops with ``UnreachableWeight`` once a point's m-weight exceeds
    ``max(h, |y|_m, |x|_m)``, ``h`` being the largest offset weight. Taking
    the start weight into the maximum keeps the test sound when rows of both
    signs are present: a negative-row prime never pushes a weight above
    ``max(start, h)``, so any excess comes from a nonnegative row and persists.
    ``cap`` is a safety valve only; ``Unknown`` means it was set too low.
    """
    x, y = as_rational(x), as_rational(y)
    work = _working_basis(f, x, y, basis)
    cm, ok = coeff_matrix_and_signs(f, work)
    if not ok:
        raise SignConditionViolated(f"weight matrix rows change sign: {cm.entries}")
    h = max_weight(f.offsets, work)
    candidates = [w for w in (h, max_weight([y], work), max_weight([x], work)) if w is not None]
    threshold = max(candidates) if candidates else None
    fired: list = []

    def over(i, p):
        if threshold is None or p == 0:
            return False
        w = m_weight(p, work)
        if w > threshold:
            fired.append((i, w))
            return True
        return False

    rec = iterate_orbit(f, x, cap, target=y, require_positive=require_positive, stop=over)
    details = {"basis": work.primes, "h": h, "threshold": threshold, "matrix": cm.entries}
    outcome = _from_orbit(rec)
    if outcome is None:
        if fired:
            i, w = fired[0]
            outcome = UnreachableWeight(i, w, threshold)
        else:
            outcome = Unknown("CapExceeded")
    return ReachVerdict(outcome, rec, "weight", details=details)


@dataclass(frozen=True)
class PrimeBound:
    p: int
    w1: int
    w2: int
    alpha: int
    beta: int
    case: str
    r_bound: Optional[int]
    bound: int


@dataclass
class WeightBoundReport:
    h: int
    per_prime: list[PrimeBound]
    M1: int
    M: Optional[int]
    truncated: bool
    basis: PrimeBasis

    def path_limit(self, domain) -> int:
        """Count of rationals in ``domain`` with m-weight at most ``M1``.

        Each is ``j / m**M1``; a repeat-free orbit segment through such points
        has at most this many points.
        """
        if self.truncated:
            raise OverflowError("m**M1 was not materialised")
        scale = self.M
        lo = math.ceil(domain.left * scale)
        hi = math.ceil(domain.right * scale)
        return hi - lo


def _largest_power_at_most(base: Fraction, limit: Fraction) -> int:
    """Largest ``t >= 0`` with ``base**t <= limit`` for ``base > 1``, ``limit >= 1``."""
    t, acc = 0, base
    while acc <= limit:
        t += 1
        acc *= base
    return t


def thm1_weight_bound(
    f: PamMap,
    kmin,
    kmax,
    x,
    y,
    basis: Optional[PrimeBasis] = None,
    max_bits: int = 10**7,
) -> WeightBoundReport:
    """Upper bound ``M1`` on the m-weight of every point of a path ``x -> y``.

    Per prime, an excursion above ``h`` changes weight by exactly the slope
    weights used; (alpha, beta) is the smallest nonnegative combination that
    cancels them. If ``|a1^alpha a2^beta| = 1`` the density bounds limit the
    net expansion to ``K = kmax/kmin`` and the excess weight is the largest
    ``t`` with ``|a_e|^t <= K^|w_e|`` (``a_e`` the expanding slope). If not,
    the number ``r`` of cancelling blocks is bounded and the excess is taken
    as ``r * (alpha + beta) * max|w|``, a conservative composition.
    """
    kmin, kmax = as_rational(kmin), as_rational(kmax)
    x, y = as_rational(x), as_rational(y)
    if len(f.pieces) != 2:
        raise NotTwoPieces(f"expected 2 pieces, got {len(f.pieces)}")
    if kmin <= 0 or kmin > kmax:
        raise BadDensityBounds(f"need 0 < kmin <= kmax, got {kmin}, {kmax}")
    if not structure_report(f).injective:
        raise NotInjective("map is not injective")
    work = _working_basis(f, x, y, basis)
    a1, a2 = f.slopes
    K = kmax / kmin

    parts = [w + 1 for w in (max_weight([b], work) for b in f.offsets) if w is not None]
    parts += [w for w in (max_weight([x], work), max_weight([y], work)) if w is not None]
    h = max(parts) if parts else 0

    per_prime = []
    for p in work.primes:
        w1, w2 = padic_weight(a1, p), padic_weight(a2, p)
        if w1 == 0 and w2 == 0:
            per_prime.append(PrimeBound(p, w1, w2, 0, 0, "constant", None, h))
            continue
        if w1 * w2 >= 0:
            # one fixed sign: an excursion above h can never come back down
            per_prime.append(PrimeBound(p, w1, w2, 0, 0, "monotone", None, h))
            continue
        g = math.gcd(w1, w2)
        alpha, beta = abs(w2) // g, abs(w1) // g
        B = abs(a1) ** alpha * abs(a2) ** beta
        if B != 1:
            r = _largest_power_at_most(B if B > 1 else 1 / B, K)
            bound = h + r * (alpha + beta) * max(abs(w1), abs(w2))
            per_prime.append(PrimeBound(p, w1, w2, alpha, beta, "rank2", r, bound))
        else:
            a_e, w_e = (a1, w1) if abs(a1) > 1 else (a2, w2)
            t = _largest_power_at_most(abs(a_e), K ** abs(w_e))
            per_prime.append(PrimeBound(p, w1, w2, alpha, beta, "rank_deficient", t, h + t))

    M1 = max([h] + [pb.bound for pb in per_prime])
    exponent = max(M1, 0)
    truncated = exponent * math.log2(work.m) > max_bits
    M = None if truncated else work.m**exponent
    return WeightBoundReport(h, per_prime, M1, M, truncated, work)


def decide_reach_bounded(
    f: PamMap,
    kmin,
    kmax,
    x,
    y,
    cap: int = 10**6,
    basis: Optional[PrimeBasis] = None,
    *,
    bounds_proven: bool = False,
    require_positive: bool = False,
) -> ReachVerdict:
    """Decide reachability for an injective two-piece map with density bounds.

    Verdicts are marked ``conditional`` unless the caller vouches for the
    bounds with ``bounds_proven``: estimated densities are not proofs.
    """
    x, y = as_rational(x), as_rational(y)
    report = thm1_weight_bound(f, kmin, kmax, x, y, basis)
    work = report.basis
    limit = None if report.truncated else report.path_limit(f.domain)
    steps = cap if limit is None else min(limit, cap)
    fired: list = []

    def over(i, p):
        if p == 0:
            return False
        w = m_weight(p, work)
        if w > report.M1:
            fired.append((i, w))
            return True
        return False

    rec = iterate_orbit(f, x, max(steps, 1), target=y, require_positive=require_positive, stop=over)
    details = {"basis": work.primes, "h": report.h, "M1": report.M1, "path_limit": limit}
    outcome = _from_orbit(rec)
    if outcome is None:
        if fired:
            i, w = fired[0]
            outcome = UnreachableWeight(i, w, report.M1)
        elif limit is not None and limit <= cap:
            outcome = UnreachableWeight(len(rec.points) - 1, report.M1, report.M1)
        else:
            outcome = Unknown("CapBelowBound")
    return ReachVerdict(outcome, rec, "bounded", conditional=not bounds_proven, details=details)
