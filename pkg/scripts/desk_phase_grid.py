#!/usr/bin/env python3
"""Desk-scale phase grid over the (epsilon, W) plane.

Runs the hierarchical-randomness model on a default 3 x 6 grid at desk
resolution (t_max = 2^13, 20 instances per cell by default; roughly ten
minutes serially) and writes cells.csv / samples.csv / manifest.json plus an
extrapolation table per epsilon at maximal randomness.

Example:
    python scripts/desk_phase_grid.py --out-dir results/desk_grid
    HIERWALK_WORKERS=8 python scripts/desk_phase_grid.py --out-dir results/desk_grid
"""

import argparse
import math
import sys

from hierwalk import PRESETS, SweepPlan, emit_extrapolation_table, emit_results, run_sweep

EPSILONS = (1.0, 0.8, 0.6)
W_GRID = (0.0, 0.2, 0.5, 1.0, 2.0, math.pi)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--instances", type=int, default=PRESETS["desk"]["n_instances"])
    parser.add_argument("--t-max", type=int, default=PRESETS["desk"]["t_max"])
    parser.add_argument("--base-seed", type=int, default=0)
    parser.add_argument("--budget", type=int, default=10 ** 12)
    args = parser.parse_args()

    plan = SweepPlan(
        epsilon_values=EPSILONS,
        W_values=W_GRID,
        model="hierarchical",
        n_instances=args.instances,
        base_seed=args.base_seed,
        t_max=args.t_max,
        budget=args.budget,
    )
    print(f"estimated cost: {plan.estimated_updates():.2e} amplitude updates")
    result = run_sweep(plan)
    written = emit_results(result, args.out_dir)
    for eps in EPSILONS:
        path = f"{args.out_dir}/extrapolation_{eps}_pi.csv"
        emit_extrapolation_table(result, eps, math.pi, path)
        written[f"extrapolation eps={eps}"] = path
    for kind, path in written.items():
        print(f"{kind}: {path}")
    for cell in result.cells:
        print(
            f"epsilon={cell.epsilon:<4} W={cell.W:<18} 1/d_w={cell.mean_inv_dw:+.4f} "
            f"+/- {cell.stderr:.4f}  {cell.classification}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
