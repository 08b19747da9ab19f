"""Command-line interface: simulate, sweep, fit, and rg subcommands.

Physics parameters are always explicit flags or config-file keys; the only
environment control is HIERWALK_WORKERS for the sweep worker pool. Every
rejected precondition exits with a nonzero status.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coins import CoinField, DisorderSpec, DISORDER_MODELS
from .harness import (
    DEFAULT_BUDGET,
    PRESETS,
    SweepPlan,
    cells_from_archive,
    emit_extrapolation_table,
    emit_results,
    read_samples_csv,
    run_sweep,
)
from .observables import DEFAULT_THRESHOLD, classify, extrapolation_points, fit_inv_dw
from .rgflow import PoleProximalError, absorbed_amplitude
from .walker import DEFAULT_IC, evolve


def parse_config(path: str) -> dict:
    """Parse a plain-text key=value config file ('#' starts a comment)."""
    cfg = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def _parse_psi_ic(text: str | None) -> np.ndarray:
    if text is None:
        return DEFAULT_IC
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("--psi-ic expects two comma-separated complex numbers, e.g. '0.6,0.8j'")
    try:
        return np.array([complex(parts[0]), complex(parts[1])])
    except ValueError as exc:
        raise ValueError(f"cannot parse --psi-ic {text!r}: {exc}") from exc


def _field_args(args, default_model: str = "none") -> tuple[float, str, float, int, int | None]:
    """Resolve (epsilon, model, W, seed, half_width) from config then flags."""
    cfg = parse_config(args.config) if getattr(args, "config", None) else {}
    epsilon = args.epsilon if args.epsilon is not None else (
        float(cfg["epsilon"]) if "epsilon" in cfg else None)
    model = args.model if args.model is not None else cfg.get("disorder_model")
    W = args.W if args.W is not None else (float(cfg["W"]) if "W" in cfg else None)
    seed = args.seed if args.seed is not None else (int(cfg["seed"]) if "seed" in cfg else None)
    half_width = getattr(args, "half_width", None)
    if half_width is None and "half_width" in cfg:
        half_width = int(cfg["half_width"])
    if epsilon is None:
        raise ValueError("epsilon is required (flag --epsilon or config key 'epsilon')")
    if model is None:
        model = default_model
    if W is None:
        W = 0.0
    if seed is None:
        seed = 0
    return float(epsilon), model, float(W), int(seed), half_width


def _require_power_of_two(name: str, value: int) -> int:
    if value < 1 or value & (value - 1):
        raise ValueError(f"{name} must be a positive power of two, got {value}")
    return value


def _window_from(args) -> tuple[float, float] | None:
    if (args.t_lo is None) != (args.t_hi is None):
        raise ValueError("--t-lo and --t-hi must be given together")
    if args.t_lo is None:
        return None
    return (args.t_lo, args.t_hi)


def _fmt(x: float) -> str:
    return repr(float(x))


def _cmd_simulate(args) -> int:
    epsilon, model, W, seed, half_width = _field_args(args)
    t_max = _require_power_of_two("--t-max", args.t_max)
    if half_width is None:
        half_width = t_max
    _require_power_of_two("half_width", half_width)
    field = CoinField(epsilon, DisorderSpec(model=model, W=W, seed=seed), half_width)
    psi = _parse_psi_ic(args.psi_ic)
    series = evolve(field, psi, t_max)
    fit = fit_inv_dw(extrapolation_points(series), _window_from(args))
    if args.series_out:
        with open(args.series_out, "w", newline="") as f:
            f.write("epsilon,W,model,instance,t,sigma\n")
            for t, s in zip(series.t, series.sigma):
                f.write(f"{_fmt(epsilon)},{_fmt(W)},{model},0,{int(t)},{_fmt(s)}\n")
    print(f"epsilon={_fmt(epsilon)}")
    print(f"W={_fmt(W)}")
    print(f"model={model}")
    print(f"seed={seed}")
    print(f"t_max={t_max}")
    print(f"inv_dw={_fmt(fit.inv_dw)}")
    print(f"log_amplitude={_fmt(fit.log_amplitude)}")
    print(f"stderr={_fmt(fit.stderr)}")
    print(f"window={_fmt(fit.window[0])},{_fmt(fit.window[1])}")
    print(f"n_points={fit.n_points}")
    print(f"classification={classify(fit, args.threshold)}")
    return 0


def _cmd_sweep(args) -> int:
    preset = PRESETS[args.preset] if args.preset else {}
    t_max = args.t_max if args.t_max is not None else preset.get("t_max")
    n_instances = args.instances if args.instances is not None else preset.get("n_instances")
    if t_max is None or n_instances is None:
        raise ValueError("--t-max and --instances are required unless --preset supplies them")
    window = _window_from(args)
    plan = SweepPlan(
        epsilon_values=tuple(args.epsilon),
        W_values=tuple(args.W),
        model=args.model,
        n_instances=n_instances,
        base_seed=args.base_seed,
        t_max=t_max,
        psi_ic=tuple(_parse_psi_ic(args.psi_ic)),
        half_width=args.half_width,
        fit_window=window,
        threshold=args.threshold,
        budget=args.budget,
    )
    result = run_sweep(plan)
    written = emit_results(result, args.out_dir, include_archive=not args.no_archive)
    for cell_spec in args.extrapolation or []:
        parts = cell_spec.split(",")
        if len(parts) != 2:
            raise ValueError(f"--extrapolation expects 'epsilon,W', got {cell_spec!r}")
        eps, w = float(parts[0]), float(parts[1])
        path = Path(args.out_dir) / f"extrapolation_{parts[0].strip()}_{parts[1].strip()}.csv"
        emit_extrapolation_table(result, eps, w, path)
        written[f"extrapolation {eps},{w}"] = path
    for kind, path in written.items():
        print(f"{kind}: {path}")
    return 0


def _cmd_fit(args) -> int:
    results_dir = Path(args.results_dir)
    samples = results_dir / "samples.csv"
    manifest_path = results_dir / "manifest.json"
    base_seed = 0
    window = None
    threshold = args.threshold
    if manifest_path.exists():
        with open(manifest_path) as f:
            manifest = json.load(f)
        plan = manifest.get("plan", {})
        base_seed = plan.get("base_seed", 0)
        if plan.get("fit_window"):
            window = tuple(plan["fit_window"])
        if threshold is None:
            threshold = plan.get("threshold", DEFAULT_THRESHOLD)
    if threshold is None:
        threshold = DEFAULT_THRESHOLD
    override = _window_from(args)
    if override is not None:
        window = override
    archive = read_samples_csv(samples, base_seed=base_seed)
    cells = cells_from_archive(archive, window, threshold)
    lines = ["epsilon,W,mean_inv_dw,stderr,classification,n_instances"]
    lines += [
        f"{_fmt(c.epsilon)},{_fmt(c.W)},{_fmt(c.mean_inv_dw)},"
        f"{_fmt(c.stderr)},{c.classification},{c.n_instances}"
        for c in cells
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_rg(args) -> int:
    z_re = args.z_re or []
    z_im = args.z_im or []
    if not z_re:
        raise ValueError("at least one --z-re is required")
    if z_im and len(z_im) != len(z_re):
        raise ValueError(f"{len(z_re)} --z-re values but {len(z_im)} --z-im values")
    if not z_im:
        z_im = [0.0] * len(z_re)
    # W = 0 reduces the hierarchical draw to the clean hierarchy exactly
    epsilon, model, W, seed, half_width = _field_args(args, default_model="hierarchical")
    if model == "extensive":
        raise ValueError("the recursion needs shared per-level coins; use model none or hierarchical")
    if half_width is None:
        half_width = 1 << args.l
    _require_power_of_two("half_width", half_width)
    field = CoinField(epsilon, DisorderSpec(model=model, W=W, seed=seed), half_width)
    psi = _parse_psi_ic(args.psi_ic)
    header = (
        "z_re,z_im,status,right_up_re,right_up_im,right_down_re,right_down_im,"
        "left_up_re,left_up_im,left_down_re,left_down_im"
    )
    lines = [header]
    for re_, im_ in zip(z_re, z_im):
        z = complex(re_, im_)
        try:
            right, left = absorbed_amplitude(args.l, field, z, psi)
        except PoleProximalError:
            lines.append(f"{_fmt(re_)},{_fmt(im_)},pole_proximal,,,,,,,,")
            continue
        vals = [right[0], right[1], left[0], left[1]]
        flat = ",".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in vals)
        lines.append(f"{_fmt(re_)},{_fmt(im_)},ok,{flat}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hierwalk",
        description="Quantum walks on the line through a hierarchy of coin barriers",
    )
    parser.add_argument("--version", action="version", version=f"hierwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_field_flags(p, with_half_width=True):
        p.add_argument("--epsilon", type=float, default=None, help="barrier strength in (0, 1]")
        p.add_argument("--model", choices=DISORDER_MODELS, default=None,
                       help="disorder model (default none)")
        p.add_argument("--W", type=float, default=None, help="disorder half-width in radians")
        p.add_argument("--seed", type=int, default=None, help="64-bit disorder seed")
        if with_half_width:
            p.add_argument("--half-width", type=int, default=None,
                           help="lattice half-extent (power of two; default t_max)")
        p.add_argument("--config", default=None,
                       help="key=value config file (epsilon, disorder_model, W, seed, half_width)")
        p.add_argument("--psi-ic", default=None,
                       help="initial spinor 'up,down' (default symmetric (1, i)/sqrt 2)")

    p_sim = sub.add_parser("simulate", help="evolve one disorder instance and fit 1/d_w")
    add_field_flags(p_sim)
    p_sim.add_argument("--t-max", type=int, required=True, help="steps to run (power of two)")
    p_sim.add_argument("--t-lo", type=float, default=None, help="fit window lower time")
    p_sim.add_argument("--t-hi", type=float, default=None, help="fit window upper time")
    p_sim.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p_sim.add_argument("--series-out", default=None, help="write the sigma(t) series CSV here")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="disorder-averaged grid over (epsilon, W)")
    p_sweep.add_argument("--epsilon", type=float, action="append", required=True,
                         help="barrier strength (repeatable)")
    p_sweep.add_argument("--W", type=float, action="append", required=True,
                         help="disorder half-width in radians (repeatable)")
    p_sweep.add_argument("--model", choices=DISORDER_MODELS, required=True)
    p_sweep.add_argument("--instances", type=int, default=None, help="instances per cell")
    p_sweep.add_argument("--base-seed", type=int, default=0)
    p_sweep.add_argument("--t-max", type=int, default=None, help="steps per instance (power of two)")
    p_sweep.add_argument("--half-width", type=int, default=None)
    p_sweep.add_argument("--preset", choices=sorted(PRESETS), default=None,
                         help="desk: t_max=2^13, 20 instances; paper: t_max=2^16, 50 instances")
    p_sweep.add_argument("--psi-ic", default=None)
    p_sweep.add_argument("--t-lo", type=float, default=None)
    p_sweep.add_argument("--t-hi", type=float, default=None)
    p_sweep.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p_sweep.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                         help="refuse plans above this many amplitude updates")
    p_sweep.add_argument("--out-dir", required=True)
    p_sweep.add_argument("--no-archive", action="store_true",
                         help="skip the per-sample samples.csv archive")
    p_sweep.add_argument("--extrapolation", action="append", default=None, metavar="EPS,W",
                         help="also write the extrapolation table for this cell (repeatable)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fit = sub.add_parser("fit", help="refit phase cells from an archived samples.csv")
    p_fit.add_argument("--results-dir", required=True,
                       help="directory holding samples.csv (and manifest.json)")
    p_fit.add_argument("--t-lo", type=float, default=None)
    p_fit.add_argument("--t-hi", type=float, default=None)
    p_fit.add_argument("--threshold", type=float, default=None)
    p_fit.add_argument("--out", default=None, help="cells CSV destination (default stdout)")
    p_fit.set_defaults(func=_cmd_fit)

    p_rg = sub.add_parser("rg", help="wall-absorption amplitudes from the shift-matrix recursion")
    p_rg.add_argument("--l", type=int, required=True, help="walls at 0 and 2^l, start at 2^(l-1)")
    add_field_flags(p_rg)
    p_rg.add_argument("--z-re", type=float, action="append", help="Re z (repeatable)")
    p_rg.add_argument("--z-im", type=float, action="append",
                      help="Im z (repeatable, pairs with --z-re; default 0)")
    p_rg.add_argument("--out", default=None, help="CSV destination (default stdout)")
    p_rg.set_defaults(func=_cmd_rg)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, PoleProximalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
