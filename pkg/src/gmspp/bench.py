"""Benchmark harness: per-(instance, method) runs, CSV rows, cut logs and box plots."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .bendm import SolveConfig, SolveReport, solve_bendm, solve_bigm, solve_bigm_le
from .cuts import CUT_LOG_HEADER, CutStage
from .instance import Instance, load_instance

CSV_COLUMNS = ("instance", "m", "cost", "method", "obj", "lb", "gap_pct", "time_s", "nodes",
               "cuts_std", "cuts_comb", "cuts_lift", "ycheck_calls", "ycheck_time_s")
METHODS = ("bigm", "bigm-le", "bendm", "oracle")


def gap_percent(obj, lb) -> Optional[float]:
    """100 (obj - lb) / obj, exact when both are rational."""
    if obj is None or lb is None:
        return None
    obj, lb = Fraction(obj), Fraction(lb)
    if obj == 0:
        return 0.0
    return float(100 * (obj - lb) / obj)


def fmt_gap(gap: Optional[float]) -> str:
    return "" if gap is None else f"{gap:.1f}"


def fmt_number(x) -> str:
    """Exact decimal when ``x`` has one (costs are tenths), else six decimals."""
    if x is None:
        return ""
    x = Fraction(x)
    den = x.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den == 1:
        digits = 0
        while (x * 10 ** digits).denominator != 1:
            digits += 1
        return f"{float(x):.{digits}f}"
    return f"{float(x):.6f}"


@dataclass
class BenchRow:
    instance: str
    m: int
    cost: str
    method: str
    obj: Optional[Fraction]
    lb: Optional[Fraction]
    time_s: float
    nodes: int = 0
    cuts_std: int = 0
    cuts_comb: int = 0
    cuts_lift: int = 0
    ycheck_calls: int = 0
    ycheck_time_s: float = 0.0

    @property
    def gap_pct(self) -> Optional[float]:
        return gap_percent(self.obj, self.lb)

    def as_csv(self) -> list[str]:
        return [self.instance, str(self.m), self.cost, self.method, fmt_number(self.obj), fmt_number(self.lb),
                fmt_gap(self.gap_pct), f"{self.time_s:.2f}", str(self.nodes), str(self.cuts_std),
                str(self.cuts_comb), str(self.cuts_lift), str(self.ycheck_calls), f"{self.ycheck_time_s:.2f}"]

    @classmethod
    def from_report(cls, inst: Instance, cost: str, report: SolveReport) -> "BenchRow":
        return cls(inst.name, inst.m, cost, report.method, report.objective, report.lower_bound,
                   report.wall_time, report.nodes,
                   report.cuts.get(CutStage.STANDARD.value, 0), report.cuts.get(CutStage.COMBINATORIAL.value, 0),
                   report.cuts.get(CutStage.LIFTED.value, 0), report.ycheck_calls, report.ycheck_time)


def cost_label(inst: Instance) -> str:
    """Scheme suffix of generated names (``<base>_m<m>_<scheme>``), else '-'."""
    tail = inst.name.rsplit("_", 1)
    return tail[1] if len(tail) == 2 and tail[1] in ("prop", "econ", "disecon") else "-"


def run_method(inst: Instance, method: str, config: SolveConfig) -> SolveReport:
    if method == "bigm":
        return solve_bigm(inst, config)
    if method == "bigm-le":
        return solve_bigm_le(inst, config)
    if method == "bendm":
        return solve_bendm(inst, config)
    if method == "oracle":
        from .oracle import solve_exact
        start = time.perf_counter()
        res = solve_exact(inst)
        return SolveReport("oracle", "Optimal", res.packing, res.objective, res.objective,
                           time.perf_counter() - start)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def _run_one(args) -> tuple[BenchRow, list[str]]:
    inst, method, config = args
    report = run_method(inst, method, config)
    cuts = [f"{inst.name},{method},{c.log_line()}" for c in report.cut_log]
    return BenchRow.from_report(inst, cost_label(inst), report), cuts


def run_bench(instances: Sequence[Instance], methods: Sequence[str], config: SolveConfig,
              jobs: int = 1) -> tuple[list[BenchRow], list[str]]:
    """Run every (instance, method) pair; rows come back in input order."""
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    tasks = [(inst, method, config) for inst in instances for method in methods]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    rows = [r for r, _ in results]
    cut_lines = [line for _, lines in results for line in lines]
    return rows, cut_lines


def load_instances(directory: Path) -> list[Instance]:
    files = sorted(Path(directory).glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no instance JSON files in {directory}")
    return [load_instance(f.read_text()) for f in files]


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(row.as_csv())
    return buf.getvalue()


def cut_log_text(lines: Iterable[str]) -> str:
    return "\n".join(["instance,method," + CUT_LOG_HEADER, *lines]) + "\n"


def read_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    return list(reader)


# --------------------------------------------------------------------------
# box plots
# --------------------------------------------------------------------------

@dataclass
class BoxStats:
    median: float
    q1: float
    q3: float
    lo_whisker: float
    hi_whisker: float
    mean: float
    outliers: list[float]


def box_stats(values: Sequence[float]) -> BoxStats:
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("box plot needs at least one value")
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    iqr = q3 - q1
    inside = v[(v >= q1 - 1.5 * iqr) & (v <= q3 + 1.5 * iqr)]
    outliers = [float(x) for x in v if x < q1 - 1.5 * iqr or x > q3 + 1.5 * iqr]
    return BoxStats(float(med), float(q1), float(q3), float(inside.min()), float(inside.max()),
                    float(v.mean()), outliers)


PANELS = (("obj", "Obj"), ("lb", "LB"), ("gap_pct", "Gap (%)"))


def plot_svg(records: Sequence[dict]) -> str:
    """Self-contained SVG: one panel per quantity, one box per method.

    Boxes span the quartiles with a median line, whiskers reach the furthest
    points within 1.5 IQR, points beyond are drawn as circles and the mean
    is a red diamond.
    """
    methods = sorted({r["method"] for r in records}, key=lambda m: (METHODS.index(m) if m in METHODS else 99, m))
    pw, ph, pad = 260, 260, 45
    width = pad + len(PANELS) * (pw + pad)
    height = ph + 2 * pad
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    for k, (col, title) in enumerate(PANELS):
        x0 = pad + k * (pw + pad)
        data = {m: [float(r[col]) for r in records if r["method"] == m and r[col] not in ("", None)]
                for m in methods}
        allv = [v for vs in data.values() for v in vs]
        out.append(f'<text x="{x0 + pw / 2}" y="{pad - 20}" text-anchor="middle" font-size="13">{title}</text>')
        out.append(f'<rect x="{x0}" y="{pad}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>')
        if not allv:
            continue
        lo, hi = min(allv), max(allv)
        if hi == lo:
            lo, hi = lo - 1, hi + 1
        span = hi - lo
        lo, hi = lo - 0.05 * span, hi + 0.05 * span

        def Y(v, lo=lo, hi=hi):
            return pad + ph - (v - lo) / (hi - lo) * ph

        for tick in np.linspace(lo, hi, 5):
            out.append(f'<text x="{x0 - 4}" y="{Y(tick) + 4:.1f}" text-anchor="end">{tick:.4g}</text>')
        slot = pw / max(1, len(methods))
        for idx, m in enumerate(methods):
            cx = x0 + slot * (idx + 0.5)
            out.append(f'<text x="{cx:.1f}" y="{pad + ph + 15}" text-anchor="middle">{m}</text>')
            if not data[m]:
                continue
            b = box_stats(data[m])
            bw = min(40.0, slot * 0.5)
            out.append(f'<line x1="{cx:.1f}" y1="{Y(b.lo_whisker):.1f}" x2="{cx:.1f}" y2="{Y(b.q1):.1f}" stroke="black"/>')
            out.append(f'<line x1="{cx:.1f}" y1="{Y(b.q3):.1f}" x2="{cx:.1f}" y2="{Y(b.hi_whisker):.1f}" stroke="black"/>')
            for wv in (b.lo_whisker, b.hi_whisker):
                out.append(f'<line x1="{cx - bw / 4:.1f}" y1="{Y(wv):.1f}" x2="{cx + bw / 4:.1f}" y2="{Y(wv):.1f}" stroke="black"/>')
            out.append(f'<rect x="{cx - bw / 2:.1f}" y="{Y(b.q3):.1f}" width="{bw:.1f}" '
                       f'height="{max(0.5, Y(b.q1) - Y(b.q3)):.1f}" fill="#cfe0f3" stroke="black"/>')
            out.append(f'<line x1="{cx - bw / 2:.1f}" y1="{Y(b.median):.1f}" x2="{cx + bw / 2:.1f}" '
                       f'y2="{Y(b.median):.1f}" stroke="black" stroke-width="2"/>')
            for o in b.outliers:
                out.append(f'<circle cx="{cx:.1f}" cy="{Y(o):.1f}" r="3" fill="none" stroke="black"/>')
            my, d = Y(b.mean), 5
            out.append(f'<polygon points="{cx:.1f},{my - d:.1f} {cx + d:.1f},{my:.1f} {cx:.1f},{my + d:.1f} '
                       f'{cx - d:.1f},{my:.1f}" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
