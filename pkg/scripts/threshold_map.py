#!/usr/bin/env python3
"""Map the uniqueness threshold gamma*(q) across dimensions.

For each q on a grid and each N in {1, 2, 3}, locate the first gamma at which
lambda(q, gamma, N) reaches 1.  Below that point the weighted contraction
closes and the integral equation has at most one solution above the barrier;
past it the contraction constant is useless.  Prints an aligned table and
optionally writes a CSV; a missing crossing inside (0, min(2, N)) leaves an
empty cell.
"""

import argparse
import csv
import sys

from singheat import ParameterError, gamma_star, lambda_gamma


def build_rows(q_values, dims):
    rows = []
    for q in q_values:
        row = {"q": q}
        for n in dims:
            res = gamma_star(q, n)
            if res.crossed:
                row[n] = (res.value, lambda_gamma(q, 0.5 * res.value, n))
            else:
                row[n] = None
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-min", type=float, default=0.05)
    ap.add_argument("--q-max", type=float, default=0.95)
    ap.add_argument("--steps", type=int, default=19)
    ap.add_argument("--out", help="optional CSV destination")
    args = ap.parse_args(argv)
    if not (0.0 < args.q_min <= args.q_max < 1.0) or args.steps < 1:
        ap.error("need 0 < q-min <= q-max < 1 and steps >= 1")

    if args.steps == 1:
        qs = [args.q_min]
    else:
        h = (args.q_max - args.q_min) / (args.steps - 1)
        qs = [args.q_min + i * h for i in range(args.steps)]
    dims = (1, 2, 3)
    try:
        rows = build_rows(qs, dims)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    header = "     q " + "".join(f"   gamma*(N={n})  lam(g*/2)" for n in dims)
    print(header)
    for row in rows:
        cells = []
        for n in dims:
            if row[n] is None:
                cells.append(f"{'-':>14}  {'-':>9}")
            else:
                g, lam_half = row[n]
                cells.append(f"{g:14.10f}  {lam_half:9.6f}")
        print(f"{row['q']:6.3f} " + "".join(cells))

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["q", "dim", "gamma_star", "lambda_at_half"])
            for row in rows:
                for n in dims:
                    if row[n] is None:
                        w.writerow([repr(row["q"]), n, "", ""])
                    else:
                        g, lam_half = row[n]
                        w.writerow([repr(row["q"]), n, repr(g), repr(lam_half)])
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
