"""Run the weight decider on every pair of small-weight points of the 3/2-map.

Points are j/q with q = 2**a * 3**b, a, b <= 2. Verdict counts go to stdout,
one row per pair to CSV.
"""
import argparse
from collections import Counter
from fractions import Fraction

from pamreach.formats import write_csv
from pamreach.pam import three_halves_map
from pamreach.reach import decide_reach_weight


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-exp", type=int, default=2)
    ap.add_argument("--out", default="reach_survey.csv")
    args = ap.parse_args()

    f = three_halves_map()
    e = args.max_exp
    q = 2**e * 3**e
    points = sorted({Fraction(j, q) for j in range(q)})
    rows, tally = [], Counter()
    for x in points:
        for y in points:
            v = decide_reach_weight(f, x, y)
            kind = type(v.outcome).__name__
            tally[kind] += 1
            rows.append((x, y, str(v.outcome), len(v.certificate.points) if v.certificate else ""))
    write_csv(args.out, ("x", "y", "verdict", "orbit_points"), rows)
    print(f"{len(points)} points, {len(rows)} pairs")
    for kind, n in tally.most_common():
        print(f"  {kind:18} {n}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
