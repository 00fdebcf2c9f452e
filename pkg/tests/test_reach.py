import random
from fractions import Fraction

import pytest

from pamreach.beta import build_beta_pam
from pamreach.errors import BadDensityBounds, NotInjective, NotTwoPieces, SignConditionViolated, SlopeZero
from pamreach.exactnum import PrimeBasis, m_weight, padic_weight
from pamreach.pam import PamMap, doubling_map, iterate_orbit, rotation_map, three_halves_map
from pamreach.reach import (
    Reached,
    Unknown,
    UnreachableCycle,
    UnreachableWeight,
    coeff_matrix_and_signs,
    decide_reach_bounded,
    decide_reach_weight,
    exact_rank,
    simulate_reach,
    thm1_weight_bound,
)

from .oracles import brute_reaches

F = Fraction


def exchange_map():
    """Injective two-piece bijection of [0, 1) with slopes 3/2 and 2/3.

    Its invariant density is 5/4 on [0, 2/5) and 5/6 on [2/5, 1).
    """
    return PamMap.from_rows((0, 1), [(0, "2/5", "3/2", "2/5"), ("2/5", 1, "2/3", "-4/15")], label="exchange")


def test_matrix_examples():
    cm, ok = coeff_matrix_and_signs(three_halves_map(), PrimeBasis.of(2, 3))
    assert cm.entries == ((1, 0), (-1, -1)) and ok and cm.rank == 2
    cm, ok = coeff_matrix_and_signs(doubling_map(), PrimeBasis.of(2))
    assert cm.entries == ((-1, -1),) and ok and cm.rank == 1
    mixed = PamMap.from_rows((0, 1), [(0, "1/2", "2/3", 0), ("1/2", 1, "3/2", 0)])
    cm, ok = coeff_matrix_and_signs(mixed, PrimeBasis.of(2, 3))
    assert cm.entries[0] == (-1, 1) and not ok


def test_matrix_extends_basis_and_rejects_zero_slope():
    cm, _ = coeff_matrix_and_signs(three_halves_map(), PrimeBasis.of(2))
    assert cm.basis.primes == (2, 3)
    flat = PamMap.from_rows((0, 1), [(0, 1, 0, "1/2")])
    with pytest.raises(SlopeZero):
        coeff_matrix_and_signs(flat)


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 0], [-1, -1]]) == 2
    assert exact_rank([[0, 0]]) == 0


def test_weight_decider_examples():
    f = three_halves_map()
    assert decide_reach_weight(f, F(1, 2), F(3, 4)).outcome == Reached(1)
    assert decide_reach_weight(doubling_map(), F(1, 3), F(1, 5)).outcome == UnreachableCycle()
    v = decide_reach_weight(f, F(1, 2), F(2, 3))
    assert isinstance(v.outcome, UnreachableWeight)
    assert brute_reaches(f, F(1, 2), F(2, 3), 10_000) is None


def test_weight_decider_refuses_mixed_rows():
    mixed = PamMap.from_rows((0, 1), [(0, "1/2", "2/3", "1/3"), ("1/2", 1, "3/2", "-3/4")])
    with pytest.raises(SignConditionViolated):
        decide_reach_weight(mixed, F(1, 4), F(1, 2))


def test_weight_decider_tiny_cap_is_unknown():
    v = decide_reach_weight(three_halves_map(), F(1, 2), F(25, 64), cap=3)
    assert isinstance(v.outcome, Unknown)


def test_simulate_examples():
    assert simulate_reach(doubling_map(), F(1, 6), F(1, 5), 100).outcome == UnreachableCycle()
    assert simulate_reach(three_halves_map(), F(1, 2), F(25, 64), 100).outcome == Reached(8)
    for f in (doubling_map(), rotation_map(), three_halves_map()):
        assert simulate_reach(f, F(1, 7), F(1, 7), 5).outcome == Reached(0)
    v = simulate_reach(three_halves_map(), F(1, 2), F(2, 3), 50)
    assert v.outcome == Unknown("CapExceeded")


def test_strict_reachability_flag():
    v = simulate_reach(rotation_map(), 0, 0, 10, require_positive=True)
    assert v.outcome == Reached(2)


def test_thm1_rotation_bound_is_h():
    rep = thm1_weight_bound(rotation_map(), 1, 1, 0, F(1, 2))
    assert all(pb.case == "constant" for pb in rep.per_prime)
    assert rep.M1 == rep.h == 2
    assert rep.M == 4 and not rep.truncated


def test_thm1_rank_deficient_bound():
    rep = thm1_weight_bound(exchange_map(), 1, 4, F(1, 5), F(3, 5))
    p2 = next(pb for pb in rep.per_prime if pb.p == 2)
    assert (p2.alpha, p2.beta, p2.case) == (1, 1, "rank_deficient")
    # (3/2)**3 = 27/8 <= 4 < (3/2)**4
    assert p2.r_bound == 3 and p2.bound == rep.h + 3
    p5 = next(pb for pb in rep.per_prime if pb.p == 5)
    assert p5.case == "constant"


def test_thm1_rank_two_case():
    f = PamMap.from_rows((0, 1), [(0, "1/2", "3/2", 0), ("1/2", 1, "1/3", "7/12")])
    rep = thm1_weight_bound(f, 1, 8, F(1, 4), F(1, 3))
    p3 = next(pb for pb in rep.per_prime if pb.p == 3)
    # weights at 3: -1 and 1; |3/2 * 1/3| = 1/2, and 2**3 <= 8
    assert (p3.alpha, p3.beta, p3.case, p3.r_bound) == (1, 1, "rank2", 3)
    assert p3.bound == rep.h + 3 * 2 * 1
    p2 = next(pb for pb in rep.per_prime if pb.p == 2)
    assert p2.case == "monotone" and p2.bound == rep.h


def test_thm1_errors():
    with pytest.raises(NotInjective):
        thm1_weight_bound(three_halves_map(), 1, 2, F(1, 2), F(3, 4))
    with pytest.raises(NotTwoPieces):
        thm1_weight_bound(build_beta_pam(F(5, 2), "greedy"), 1, 2, 0, 1)
    with pytest.raises(BadDensityBounds):
        thm1_weight_bound(rotation_map(), 0, 1, 0, F(1, 2))
    with pytest.raises(BadDensityBounds):
        thm1_weight_bound(rotation_map(), 2, 1, 0, F(1, 2))


def test_bounded_decider_examples():
    rot = rotation_map()
    v = decide_reach_bounded(rot, 1, 1, 0, F(1, 2), bounds_proven=True)
    assert v.outcome == Reached(1) and not v.conditional
    v = decide_reach_bounded(rot, 1, 1, 0, F(1, 4))
    assert v.outcome == UnreachableCycle() and v.conditional


def test_bounded_decider_stops_on_weight():
    rot = rotation_map()
    v = decide_reach_bounded(rot, 1, 1, F(1, 2), F(1, 8))
    assert v.outcome == UnreachableCycle()


def test_bounded_decider_cap_below_bound():
    v = decide_reach_bounded(exchange_map(), F(5, 6), F(5, 4), F(1, 7), F(2, 7), cap=1)
    assert isinstance(v.outcome, (Unknown, Reached, UnreachableCycle, UnreachableWeight))
    if isinstance(v.outcome, Unknown):
        assert v.outcome.reason == "CapBelowBound"


def test_bounded_decider_against_brute_force():
    f = exchange_map()
    rnd = random.Random(7)
    for _ in range(60):
        q = rnd.choice([5, 6, 10, 12, 15, 30, 45])
        x, y = F(rnd.randrange(q), q), F(rnd.randrange(q), q)
        v = decide_reach_bounded(f, F(5, 6), F(5, 4), x, y, cap=10**4, bounds_proven=True)
        n = brute_reaches(f, x, y, 10**4)
        if isinstance(v.outcome, Reached):
            assert n == v.outcome.step
        else:
            assert v.definite and n is None


def test_weight_decider_agrees_with_simulation():
    f = three_halves_map()
    rnd = random.Random(3)
    for _ in range(100):
        x = F(rnd.randrange(64), 64)
        orbit = iterate_orbit(f, x, 30).points
        y = rnd.choice(orbit) if rnd.random() < 0.7 else F(rnd.randrange(64), 64)
        v = decide_reach_weight(f, x, y)
        s = simulate_reach(f, x, y, 10**4)
        if isinstance(v.outcome, Reached):
            assert s.outcome == v.outcome
            assert v.certificate.points[v.outcome.step] == y and v.certificate.replay(f)
        if isinstance(s.outcome, Reached):
            assert v.outcome == s.outcome


def test_monotone_weight_certificate():
    f = three_halves_map()
    h = 0  # largest offset weight: |-2|_m = 0 over {2, 3}
    for j in range(1, 64, 2):
        pts = iterate_orbit(f, F(j, 64), 200).points
        ws = [padic_weight(x, 2) for x in pts if x != 0]
        for a, b in zip(ws, ws[1:]):
            if a > h:
                assert b >= a


def test_bounded_weight_orbits_repeat():
    basis = PrimeBasis.of(2)
    w = 3
    for f in (rotation_map(F(1, 8)), rotation_map(F(3, 8)), doubling_map()):
        for j in range(8):
            pts = iterate_orbit(f, F(j, 8), 2**w).points
            assert all(p == 0 or m_weight(p, basis) <= w for p in pts)
            assert len(pts) == 2**w + 1 or len(set(pts)) < len(pts)
            assert len(set(pts[: 2**w + 1])) <= 2**w
