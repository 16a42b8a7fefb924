#!/usr/bin/env python3
"""Decay of the regularization ladder toward its limit.

Runs the monotone scheme with a doubling n-schedule and reports the sup gap
between consecutive levels at the final time.  The 1/n data shift enters the
solution through the sublinear source, so the distance to the limit scales
like n^{-(1-q)} rather than 1/n (for gamma = 0 and zero data this is exact:
the level-n solution is (n^{q-1} + (1-q) t)^{1/(1-q)}).  The last column
rescales the gap by n^{1-q} and should settle toward a constant; the trailing
line reports the empirical decay order per doubling, to be compared with
1 - q.
"""

import argparse
import csv
import sys

import numpy as np

from singheat import (
    ConvergenceError,
    ParameterError,
    Params,
    SolveConfig,
    make_grid,
    monotone_solve,
    standard_data,
)


def ladder_gaps(q, gamma, data_spec, t_end, levels, half_width, points):
    grid = make_grid(1, half_width, points)
    params = Params(q=q, gamma=gamma, n_dim=1)
    schedule = tuple(2**j for j in range(levels))
    cfg = SolveConfig(n_schedule=schedule, eps_fp=1e-10)
    traj = monotone_solve(standard_data(grid, data_spec), params, t_end, cfg)
    gaps = traj.diagnostics["inter_level_gaps"]
    used = traj.diagnostics["n_used"]
    return used, gaps


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--gamma", type=float, default=0.3)
    ap.add_argument("--data", default="zero", help="initial data spec (default: zero)")
    ap.add_argument("--t-end", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=8, help="ladder length; schedule is 1,2,4,...")
    ap.add_argument("--half-width", type=float, default=12.0)
    ap.add_argument("--points", type=int, default=256)
    ap.add_argument("--out", help="optional CSV destination")
    args = ap.parse_args(argv)
    if args.levels < 2:
        ap.error("need at least two levels to measure a gap")

    try:
        used, gaps = ladder_gaps(
            args.q, args.gamma, args.data, args.t_end, args.levels, args.half_width, args.points
        )
    except (ParameterError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"q = {args.q}, gamma = {args.gamma}, data = {args.data}, t_end = {args.t_end}")
    print(f"{'n -> 2n':>12}  {'sup gap':>12}  {'gap * n^(1-q)':>14}")
    rows = []
    for n_prev, gap in zip(used, gaps):
        scaled = gap * n_prev ** (1.0 - args.q)
        rows.append((n_prev, gap, scaled))
        print(f"{n_prev:>5} -> {2 * n_prev:<5}  {gap:12.4e}  {scaled:14.4f}")
    if len(gaps) >= 2 and gaps[-1] > 0:
        rate = np.log2(gaps[-2] / gaps[-1])
        print(f"empirical order of the last doubling: {rate:.3f} (predicted: 1 - q = {1 - args.q:.3f})")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n_prev", "sup_gap", "gap_scaled"])
            for n_prev, gap, scaled in rows:
                w.writerow([n_prev, repr(gap), repr(scaled)])
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
