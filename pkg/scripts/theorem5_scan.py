"""Exact scan of {2**n * n * alpha} < 1/2 for n up to Delta_i, written to CSV."""
import argparse
import time

from pamreach.formats import decimal, write_csv
from pamreach.seqlab import alpha_partial, first_failure, theorem5_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--i", type=int, default=4, help="number of alpha terms (at most 4)")
    ap.add_argument("--out", default="theorem5.csv")
    args = ap.parse_args()

    _, deltas = alpha_partial(args.i)
    t0 = time.perf_counter()
    rows = theorem5_scan(deltas[-1], args.i)
    dt = time.perf_counter() - t0
    write_csv(args.out, ("n", "value", "value_decimal", "passes"),
              ((r.n, r.value.to_fraction(), decimal(r.value.to_fraction()), r.passes) for r in rows))
    worst = max(rows, key=lambda r: r.value.to_fraction())
    print(f"Delta = {deltas}; scanned n = 0..{deltas[-1]} in {dt:.3f}s")
    print(f"first failure: {first_failure(rows)}; largest value {decimal(worst.value.to_fraction())} at n = {worst.n}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
