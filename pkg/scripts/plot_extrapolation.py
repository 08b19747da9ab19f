#!/usr/bin/env python3
"""Plot extrapolation tables (X = 1/log t vs Y = log sigma / log t) with error bars.

Takes one or more extrapolation CSVs written by the sweep machinery and draws
each as a series with a dashed linear extrapolation to the X = 0 intercept,
which estimates 1/d_w.

Example:
    python scripts/plot_extrapolation.py results/desk_grid/extrapolation_*.csv -o extrap.png
"""

import argparse
import sys

import numpy as np


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("tables", nargs="+", help="extrapolation CSV files")
    parser.add_argument("-o", "--out", default=None, help="image file (default: show window)")
    parser.add_argument("--t-lo", type=float, default=None,
                        help="only extrapolate from samples with t >= this")
    args = parser.parse_args()

    try:
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib is required for plotting: pip install matplotlib", file=sys.stderr)
        return 1

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for path in args.tables:
        data = np.genfromtxt(path, delimiter=",", names=True)
        X, Y, err = data["X"], data["Y"], data["Y_stderr"]
        label = path.rsplit("/", 1)[-1].removeprefix("extrapolation_").removesuffix(".csv")
        line = ax.errorbar(X, Y, yerr=err, marker="o", ms=3.5, lw=1, label=label)
        sel = np.ones_like(X, bool) if args.t_lo is None else (data["t"] >= args.t_lo)
        if sel.sum() >= 3:
            slope, intercept = np.polyfit(X[sel], Y[sel], 1)
            xs = np.array([0.0, X[sel].max()])
            ax.plot(xs, intercept + slope * xs, "--", lw=1, color=line[0].get_color())
            ax.plot(0.0, intercept, "x", color=line[0].get_color())
    ax.set_xlabel(r"$1/\log t$")
    ax.set_ylabel(r"$\log \sigma / \log t$")
    ax.set_xlim(left=0.0)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=160)
        print(f"wrote {args.out}")
    else:
        plt.show()
    return 0


if __name__ == "__main__":
    sys.exit(main())
