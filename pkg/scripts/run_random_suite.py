"""Solve seeded random instances with every method and compare against the oracle.

Writes the benchmark CSV (plus cut-log sidecar) and prints one line per
mismatch. Instance generation matches the test-suite's ``seeded_instance``.

    python scripts/run_random_suite.py --seeds 100 --out random.csv
"""

import argparse
import math
import random
import sys
from pathlib import Path

from gmspp.bench import cut_log_text, rows_to_csv, run_bench
from gmspp.bendm import SolveConfig
from gmspp.instance import CostScheme, random_instance


def seeded_instance(seed: int, n_range=(3, 6), m_range=(1, 2)):
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    m = rng.randint(*m_range)
    return random_instance(rng, n, m, scheme=list(CostScheme)[seed % 3], name=f"seed{seed}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--first", type=int, default=0)
    ap.add_argument("--methods", default="oracle,bendm,bigm-le,bigm")
    ap.add_argument("--time-limit", type=float, default=math.inf)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="random.csv")
    args = ap.parse_args(argv)

    methods = args.methods.split(",")
    instances = [seeded_instance(s) for s in range(args.first, args.first + args.seeds)]
    rows, cuts = run_bench(instances, methods, SolveConfig(time_limit=args.time_limit), jobs=args.jobs)
    Path(args.out).write_text(rows_to_csv(rows))
    Path(args.out).with_suffix(".cuts.csv").write_text(cut_log_text(cuts))

    reference = {r.instance: r.obj for r in rows if r.method == "oracle"}
    mismatches = [r for r in rows if r.instance in reference and r.obj != reference[r.instance]]
    for r in mismatches:
        print(f"{r.instance} {r.method}: {r.obj} != oracle {reference[r.instance]}")
    print(f"{len(instances)} instances, {len(rows)} runs, {len(mismatches)} mismatches, {len(cuts)} cuts")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
