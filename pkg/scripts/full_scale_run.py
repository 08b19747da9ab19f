#!/usr/bin/env python3
"""Full-scale run of one (epsilon, W) cell: t_max = L = 2^16, 50 instances.

One instance takes on the order of a minute, so a full 50-instance cell is an
hour-scale serial job; set HIERWALK_WORKERS to parallelize over instances.
Start with --instances 1 to gauge the per-instance cost on your machine.

Example:
    python scripts/full_scale_run.py --epsilon 0.8 --W 0.5 --out-dir results/full_08_05
"""

import argparse
import sys

from hierwalk import PRESETS, SweepPlan, emit_extrapolation_table, emit_results, run_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--epsilon", type=float, required=True)
    parser.add_argument("--W", type=float, required=True)
    parser.add_argument("--model", default="hierarchical",
                        choices=("none", "hierarchical", "extensive"))
    parser.add_argument("--instances", type=int, default=PRESETS["paper"]["n_instances"])
    parser.add_argument("--base-seed", type=int, default=0)
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--no-archive", action="store_true",
                        help="skip samples.csv (it grows with instances)")
    args = parser.parse_args()

    plan = SweepPlan(
        epsilon_values=(args.epsilon,),
        W_values=(args.W,),
        model=args.model,
        n_instances=args.instances,
        base_seed=args.base_seed,
        t_max=PRESETS["paper"]["t_max"],
    )
    print(f"estimated cost: {plan.estimated_updates():.2e} amplitude updates")
    result = run_sweep(plan)
    written = emit_results(result, args.out_dir, include_archive=not args.no_archive)
    table = f"{args.out_dir}/extrapolation_{args.epsilon}_{args.W}.csv"
    emit_extrapolation_table(result, args.epsilon, args.W, table)
    written["extrapolation"] = table
    for kind, path in written.items():
        print(f"{kind}: {path}")
    cell = result.cells[0]
    print(
        f"epsilon={cell.epsilon} W={cell.W}: 1/d_w = {cell.mean_inv_dw:+.4f} "
        f"+/- {cell.stderr:.4f} ({cell.classification}, {cell.n_instances} instances)"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
