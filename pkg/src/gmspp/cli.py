"""Command line: generate, solve, lpbound, ycheck, export, bench, plot.

Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 guard violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .bench import (METHODS, BenchRow, cost_label, cut_log_text, load_instances, plot_svg, read_csv,
                    rows_to_csv, run_bench, run_method)
from .bendm import SolveConfig, save_solution
from .cuts import CutStage
from .formulations import build_bigm, build_master, lp_bigm_bound, lp_pc_bound
from .instance import CostScheme, InstanceError, generate_gmspp, load_instance, parse_spp, save_instance
from .mip import write_mps
from .oracle import OracleGuardError
from .ycheck import DEFAULT_CONFIG, PlacedItem, PruneConfig, YCheckInstance, YCheckUndecided, ycheck

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_GUARD = 0, 1, 2, 3
DEFAULT_TIME_LIMIT = 900.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _config(args) -> SolveConfig:
    return SolveConfig(time_limit=args.time_limit, cut_stage=CutStage(args.cuts))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_generate(args) -> int:
    src = Path(args.base)
    files = sorted(p for p in src.iterdir() if p.is_file()) if src.is_dir() else [src]
    if not files:
        raise UsageError(f"no base files in {src}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for f in files:
        base = parse_spp(_read(str(f)), name=f.stem)
        for m in args.m:
            for scheme in args.schemes:
                inst = generate_gmspp(base, m, CostScheme.parse(scheme))
                (out / f"{inst.name}.json").write_text(save_instance(inst))
                print(out / f"{inst.name}.json")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(_read(args.instance))
    report = run_method(inst, args.method, _config(args))
    row = BenchRow.from_report(inst, cost_label(inst), report)
    summary = dict(zip(("instance", "m", "cost", "method", "obj", "lb", "gap_pct", "time_s", "nodes",
                        "cuts_std", "cuts_comb", "cuts_lift", "ycheck_calls", "ycheck_time_s"), row.as_csv()))
    summary["status"] = report.status
    print(json.dumps(summary))
    if report.packing is not None and args.out:
        _write(args.out, save_solution(inst, report.packing) + "\n")
    if args.cut_log and report.cut_log:
        _write(args.cut_log, cut_log_text(f"{inst.name},{args.method},{c.log_line()}" for c in report.cut_log))
    return EXIT_OK if report.packing is not None else EXIT_RUNTIME


def cmd_lpbound(args) -> int:
    inst = load_instance(_read(args.instance))
    t0 = time.perf_counter()
    bigm = lp_bigm_bound(inst)
    t1 = time.perf_counter()
    pc = lp_pc_bound(inst)
    t2 = time.perf_counter()
    print(json.dumps({"instance": inst.name, "lp_bigm": round(bigm, 6), "lp_bigm_time_s": round(t1 - t0, 3),
                      "lp_pc": round(pc, 6), "lp_pc_time_s": round(t2 - t1, 3)}))
    return EXIT_OK


def _placement(data: dict) -> YCheckInstance:
    try:
        items = tuple(PlacedItem(int(it.get("j", k)), int(it["p"]), int(it["w"]), int(it["h"]))
                      for k, it in enumerate(data["items"]))
        return YCheckInstance(int(data["W"]), int(data["H"]), items)
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"placement JSON needs W, H and items with p, w, h: {exc}") from None


def cmd_ycheck(args) -> int:
    try:
        data = json.loads(_read(args.placement))
    except json.JSONDecodeError as exc:
        raise InstanceError(f"placement is not valid JSON: {exc}") from None
    yc = _placement(data)
    disabled = set(args.disable or ())
    config = PruneConfig(**{k: k not in disabled for k in PruneConfig.CRITERIA},
                         node_limit=args.node_limit or DEFAULT_CONFIG.node_limit)
    res = ycheck(yc, config)
    print(json.dumps({"feasible": res.feasible, "y": res.y, "nodes": res.stats.nodes,
                      "prunes": dict(res.stats.prunes)}))
    return EXIT_OK


def cmd_export(args) -> int:
    inst = load_instance(_read(args.instance))
    model, _ = build_bigm(inst) if args.formulation == "bigm" else build_master(inst)
    _write(args.out, write_mps(model))
    return EXIT_OK


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise UsageError(f"unknown methods {unknown}; choose from {', '.join(METHODS)}")
    instances = load_instances(Path(args.directory))
    rows, cuts = run_bench(instances, methods, _config(args), jobs=args.jobs)
    _write(args.out, rows_to_csv(rows))
    if args.out and args.out != "-":
        sidecar = Path(args.out).with_suffix(".cuts.csv")
        sidecar.write_text(cut_log_text(cuts))
    return EXIT_OK


def cmd_plot(args) -> int:
    records = read_csv(_read(args.csv))
    if not records:
        raise UsageError(f"{args.csv} has no rows")
    _write(args.out, plot_svg(records))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gmspp", description="Exact solvers for cost-weighted multiple strip packing.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp):
        sp.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
        sp.add_argument("--cuts", choices=[s.value for s in CutStage], default=CutStage.LIFTED.value)

    g = sub.add_parser("generate", help="derive instance JSONs from base SPP files")
    g.add_argument("base", help="SPP file or directory of SPP files")
    g.add_argument("--m", type=int, nargs="+", default=[2, 3], choices=[2, 3])
    g.add_argument("--schemes", nargs="+", default=[s.value for s in CostScheme],
                   choices=[s.value for s in CostScheme])
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("instance")
    s.add_argument("--method", choices=METHODS, default="bendm")
    solver_flags(s)
    s.add_argument("--out", help="solution JSON path")
    s.add_argument("--cut-log", help="cut log CSV path")
    s.set_defaults(func=cmd_solve)

    lp = sub.add_parser("lpbound", help="LP-BigM and LP-PC relaxation values")
    lp.add_argument("instance")
    lp.set_defaults(func=cmd_lpbound)

    y = sub.add_parser("ycheck", help="decide vertical feasibility of an x-placement")
    y.add_argument("placement", help='JSON {"W":..,"H":..,"items":[{"j":..,"p":..,"w":..,"h":..}]}')
    y.add_argument("--disable", nargs="*", choices=PruneConfig.CRITERIA)
    y.add_argument("--node-limit", type=int)
    y.set_defaults(func=cmd_ycheck)

    e = sub.add_parser("export", help="write a formulation as fixed-format MPS")
    e.add_argument("instance")
    e.add_argument("--formulation", choices=["bigm", "master"], default="bigm")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)

    b = sub.add_parser("bench", help="run methods over an instance directory")
    b.add_argument("directory")
    b.add_argument("--methods", default="bigm,bigm-le,bendm")
    solver_flags(b)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", help="CSV path (a .cuts.csv sidecar is written next to it)")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="box plots of Obj, LB and gap per method")
    pl.add_argument("csv")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gmspp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleGuardError as exc:
        print(f"gmspp: guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InstanceError, YCheckUndecided, ValueError, RuntimeError, OSError) as exc:
        print(f"gmspp: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
