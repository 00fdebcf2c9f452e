"""Iterate the exact transfer operator and read off density bounds.

For each map the uniform density is pushed forward a few times; the L1
distances between iterates show whether a fixed point is reached. The
extrema of the last iterate are candidate (Kmin, Kmax) inputs for the
density-bounded decider. They are estimates, so its verdicts stay
conditional unless the fixed point is checked exactly, as for the
exchange map below.
"""
import argparse
from fractions import Fraction

from pamreach.beta import build_beta_pam
from pamreach.pam import PamMap, doubling_map, rotation_map, three_halves_map
from pamreach.reach import decide_reach_bounded
from pamreach.transfer import StepDensity, density_bounds, iterate_transfer, transfer_once


def cesaro_mean(history):
    """Pointwise average of step densities on their common refinement."""
    pts = sorted(set().union(*(phi.breakpoints for phi in history)))
    vals = [sum(phi(a) for phi in history) / len(history) for a in pts[:-1]]
    return StepDensity(tuple(pts), tuple(vals)).merged()


def exchange_map():
    return PamMap.from_rows((0, 1), [(0, "2/5", "3/2", "2/5"), ("2/5", 1, "2/3", "-4/15")], label="exchange")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--merge-cap", type=int, default=2000)
    args = ap.parse_args()

    maps = [doubling_map(), rotation_map(), three_halves_map(), exchange_map(),
            build_beta_pam(Fraction(5, 2), "greedy"), build_beta_pam(Fraction(7, 3), "lazy")]
    print(f"{'map':28} {'steps':>5} {'pieces':>6} {'last L1':>12} {'Kmin':>10} {'Kmax':>10}")
    for f in maps:
        run = iterate_transfer(f, StepDensity.uniform(f.domain), args.steps, args.merge_cap, keep_history=True)
        # bounds from the Cesaro average, which also settles period-2 oscillations
        kmin, kmax = density_bounds(cesaro_mean(run.history[1:]), f.domain)
        last = float(run.distances[-1]) if run.distances else 0.0
        flag = " (stopped at merge cap)" if run.stopped_early else ""
        print(f"{f.label or '?':28} {run.steps_done:>5} {len(run.phi_n.values):>6} {last:>12.3e} "
              f"{float(kmin):>10.4f} {float(kmax):>10.4f}{flag}")

    print("A Kmin that keeps shrinking as --steps grows marks a transient region with no positive lower bound.")

    f = exchange_map()
    phi = StepDensity((0, Fraction(2, 5), 1), (Fraction(5, 4), Fraction(5, 6)))
    proven = transfer_once(f, phi) == phi
    print(f"\nexchange map: density 5/4 | 5/6 is exactly invariant: {proven}")
    for x, y in [(Fraction(1, 5), Fraction(3, 5)), (Fraction(1, 7), Fraction(2, 7)), (Fraction(1, 4), Fraction(1, 3))]:
        v = decide_reach_bounded(f, Fraction(5, 6), Fraction(5, 4), x, y, bounds_proven=proven)
        print(f"  reach {x} -> {y}: {v.outcome} (conditional={v.conditional}, M1={v.details.get('M1')})")


if __name__ == "__main__":
    main()
