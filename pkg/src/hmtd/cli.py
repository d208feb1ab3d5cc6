"""Command line entry point: optimize, sweep, certify, defaults.

Exit codes: 0 success, 1 config error, 2 certification failure,
3 infeasible scenario (no optimal partial ratio exists).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import ConfigError, build_scenario, load_config
from .experiments import certify, write_sweep
from .fleet import STRATEGIES, run_strategy
from .model import InfeasibleConfigurationError, InfeasibleThresholdError

EXIT_OK, EXIT_CONFIG, EXIT_CERTIFY, EXIT_INFEASIBLE = 0, 1, 2, 3


def _decision_dict(d) -> dict:
    out = {"decision_var": d.decision_var, "cost": d.cost, "avg_error": d.avg_error,
           "threshold": d.threshold, "delay": d.delay, "case_tag": d.case_tag,
           "error_feasible": d.error_feasible, "delay_feasible": d.delay_feasible,
           "constraint_active": d.constraint_active}
    if d.breakdown is not None:
        out["breakdown"] = vars(d.breakdown)
    return out


def cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    scenario = build_scenario(cfg.params)
    strategies = args.strategy or list(STRATEGIES)
    result, status = {}, EXIT_OK
    for s in strategies:
        try:
            rep = run_strategy(scenario, s)
        except InfeasibleConfigurationError as e:
            result[s] = {"error": str(e)}
            status = EXIT_INFEASIBLE
            continue
        result[s] = {"total_cost": rep.total_cost, "mean_error": rep.mean_error,
                     "error_feasible": rep.error_feasible,
                     "delay_feasible": rep.delay_feasible,
                     "uavs": [_decision_dict(d) for d in rep.decisions]}
    if args.json:
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        print(f"{'strategy':<11} {'total_cost':>12} {'mean_error':>11}  decision  tag")
        for s, r in result.items():
            if "error" in r:
                print(f"{s:<11} {'-':>12} {'-':>11}  no optimum: {r['error']}")
                continue
            dv = ",".join(f"{u['decision_var']:.4f}" for u in r["uavs"])
            tags = ",".join(sorted({u["case_tag"] for u in r["uavs"]}))
            flag = "" if r["error_feasible"] else "  [error > eps_T]"
            print(f"{s:<11} {r['total_cost']:>12.6f} {r['mean_error']:>11.6f}  "
                  f"{dv}  {tags}{flag}")
    return status


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    sweeps = cfg.sweeps
    if args.only:
        sweeps = tuple(s for s in sweeps if s.label in args.only)
        missing = set(args.only) - {s.label for s in sweeps}
        if missing:
            raise ConfigError(f"sweeps: no sweep named {sorted(missing)}")
    if not sweeps:
        raise ConfigError("sweeps: config defines no sweeps")
    out_dir = Path(args.out_dir)
    for sw in sweeps:
        csv_path = Path(sw.output) if sw.output else out_dir / f"{sw.label}.csv"
        if args.out_dir != "." and sw.output and not Path(sw.output).is_absolute():
            csv_path = out_dir / sw.output
        rows = write_sweep(cfg.params, sw, csv_path, seed=cfg.seed)
        flagged = sum(1 for r in rows if not r.ok)
        line = f"{sw.label}: {len(rows)} rows -> {csv_path}"
        if flagged:
            line += f" ({flagged} flagged)"
        if args.plot:
            from .plotting import plot_sweep
            png = plot_sweep(rows, sw.param, csv_path.with_suffix(".png"), title=sw.label)
            line += f", figure {png}"
        print(line)
    return EXIT_OK


def cmd_certify(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else (cfg.seed or 0)
    rep = certify(cfg.params, args.draws, seed, args.resolution)
    text = rep.to_json()
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_CERTIFY


def cmd_defaults(args) -> int:
    from .config import dump_defaults
    text = dump_defaults()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmtd", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hmtd {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="decision breakdown for one scenario")
    p.add_argument("-c", "--config")
    p.add_argument("-s", "--strategy", action="append", choices=STRATEGIES)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="run the sweeps a config defines")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("-o", "--out-dir", default=".")
    p.add_argument("--only", action="append", metavar="NAME")
    p.add_argument("--plot", action="store_true", help="also render PNG figures")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="closed form vs grid oracle on random draws")
    p.add_argument("-c", "--config")
    p.add_argument("-n", "--draws", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("-r", "--resolution", type=float, default=1e-4)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("defaults", help="print the default config")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_defaults)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InfeasibleThresholdError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
