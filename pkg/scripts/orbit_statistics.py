"""Empirical distribution of long rational orbits and of {(3/2)**n}.

An experiment only: long orbits of expanding maps are binned exactly and
compared with the uniform distribution through a dyadic star discrepancy.
Nothing here decides anything about density of orbits.
"""
import argparse
import itertools
from fractions import Fraction

from pamreach.formats import write_csv
from pamreach.pam import doubling_map, iterate_orbit, three_halves_map
from pamreach.seqlab import beta_fractional_orbit, mahler_sequence, star_discrepancy
from pamreach.transfer import dyadic_bins, empirical_histogram


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--bins", type=int, default=3, help="2**bins dyadic bins")
    ap.add_argument("--out", default="orbit_statistics.csv")
    args = ap.parse_args()

    sources = {
        "doubling from 1/7": iterate_orbit(doubling_map(), Fraction(1, 7), args.n).points,
        "3/2-map from 1/5": iterate_orbit(three_halves_map(), Fraction(1, 5), args.n).points,
        "{(5/2) x} from 1/3": list(itertools.islice(beta_fractional_orbit(Fraction(5, 2), Fraction(1, 3)), args.n)),
        "{(3/2)^n}": mahler_sequence(args.n),
    }
    bins = dyadic_bins(args.bins)
    rows = []
    for name, pts in sources.items():
        hist = empirical_histogram(pts, bins)
        disc = star_discrepancy(pts)
        distinct = len(set(pts))
        print(f"{name:22} points={len(pts):5} distinct={distinct:5} D*={float(disc):.4f} "
              f"freq={[round(float(fr), 3) for fr in hist.frequencies]}")
        rows += [(name, b.left, b.right, c) for b, c in zip(bins, hist.counts)]
    write_csv(args.out, ("source", "bin_left", "bin_right", "count"), rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
