"""Desk run on the N1 class: LP-PC values and BendM solves for m=2, proportional costs.

    python scripts/run_n1_desk.py path/to/N1a path/to/N1b ... --time-limit 1800

Reference values: LP-PC and the optimum are 40000 on every N1 instance of this
configuration.
"""

import argparse
import sys
import time
from pathlib import Path

from gmspp.bendm import SolveConfig, save_solution, solve_bendm
from gmspp.formulations import lp_pc_bound
from gmspp.instance import CostScheme, generate_gmspp, parse_spp
from gmspp.formulations import build_master
from gmspp.mip import write_mps
from gmspp.normal_positions import build_table

REFERENCE = 40000


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+")
    ap.add_argument("--time-limit", type=float, default=1800.0)
    ap.add_argument("--out", default="n1_out", help="directory for solutions and master MPS files")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    closed = 0
    for f in args.files:
        path = Path(f)
        inst = generate_gmspp(parse_spp(path.read_text(), name=path.stem), 2, CostScheme.PROPORTIONAL)
        t0 = time.perf_counter()
        pc = lp_pc_bound(inst)
        t_pc = time.perf_counter() - t0
        rep = solve_bendm(inst, SolveConfig(time_limit=args.time_limit))
        hit = rep.optimal and rep.objective == REFERENCE
        closed += hit
        print(f"{inst.name}: lp_pc={pc:g} ({t_pc:.1f}s) bendm {rep.status} obj={rep.objective} "
              f"lb={rep.lower_bound} cuts={sum(rep.cuts.values())} time={rep.wall_time:.0f}s")
        if rep.packing is not None:
            (out / f"{inst.name}.solution.json").write_text(save_solution(inst, rep.packing) + "\n")
        if not hit:
            # master plus every cut of the run, for an external MIP solver
            table = build_table(inst)
            model, vm = build_master(inst, table)
            for k, cut in enumerate(rep.cut_log):
                model.append(cut.to_constraint(model, vm.x, vm.H, table, f"benders_{k + 1}"))
            (out / f"{inst.name}.master.mps").write_text(write_mps(model))
    print(f"{closed}/{len(args.files)} closed at {REFERENCE}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
