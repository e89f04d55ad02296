"""Fixed-format MPS export (and a reader for round-trip checks).

Fixed-format name fields hold at most 8 characters, so rows and columns are
written as ``R0000001`` / ``C0000001``; a comment block at the top of the file
maps these back to the model's own names.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .model import EQ, GE, INF, LE, LinearModel

_ROW_TYPE = {LE: "L", GE: "G", EQ: "E"}
_SENSE = {"L": LE, "G": GE, "E": EQ}


def _fmt(x) -> str:
    x = float(x)
    if x == int(x) and abs(x) < 1e11:
        return str(int(x))
    text = f"{x:.12g}"
    return text if len(text) <= 12 else f"{x:.6e}"


def _line(f1: str, f2: str, f3: str = "", f4: str = "", f5: str = "", f6: str = "") -> str:
    # fields start at columns 2, 5, 15, 25, 40, 50
    out = f" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}"
    if f5:
        out += f"   {f5:<8}  {f6:>12}"
    return out.rstrip()


def _marker(k: int, tag: str) -> str:
    return f"    {'M%04d' % k:<8}  'MARKER'{' ' * 17}{tag}"


def write_mps(model: LinearModel) -> str:
    cols = [f"C{k + 1:07d}" for k in range(model.num_vars)]
    rows = [f"R{k + 1:07d}" for k in range(model.num_constraints)]
    out = ["* generated by gmspp", f"* model {model.name}"]
    out += [f"* {c} {v.name}" for c, v in zip(cols, model.variables)]
    out += [f"* {r} {con.name}" for r, con in zip(rows, model.constraints)]
    out.append(f"NAME          {model.name[:8].upper() or 'MODEL'}")
    out.append("ROWS")
    out.append(_line("N", "COST"))
    for r, con in zip(rows, model.constraints):
        out.append(_line(_ROW_TYPE[con.sense], r))

    column_entries: list[list[tuple[str, object]]] = [[] for _ in range(model.num_vars)]
    for k, v in enumerate(model.variables):
        if v.obj != 0:
            column_entries[k].append(("COST", v.obj))
    for r, con in zip(rows, model.constraints):
        for j in sorted(con.coeffs):
            column_entries[j].append((r, con.coeffs[j]))

    out.append("COLUMNS")
    in_int = False
    marker = 0
    for k, v in enumerate(model.variables):
        if v.integer != in_int:
            tag = "'INTORG'" if v.integer else "'INTEND'"
            out.append(_marker(marker, tag))
            marker += 1
            in_int = v.integer
        entries = column_entries[k]
        if not entries:
            # keep the column visible to readers
            entries = [("COST", 0)]
        for a in range(0, len(entries), 2):
            pair = entries[a:a + 2]
            if len(pair) == 2:
                out.append(_line("", cols[k], pair[0][0], _fmt(pair[0][1]), pair[1][0], _fmt(pair[1][1])))
            else:
                out.append(_line("", cols[k], pair[0][0], _fmt(pair[0][1])))
    if in_int:
        out.append(_marker(marker, "'INTEND'"))

    out.append("RHS")
    for r, con in zip(rows, model.constraints):
        if con.rhs != 0:
            out.append(_line("", "RHS", r, _fmt(con.rhs)))

    out.append("BOUNDS")
    for c, v in zip(cols, model.variables):
        lb, ub = v.lb, v.ub
        if lb == ub:
            out.append(_line("FX", "BND", c, _fmt(lb)))
            continue
        if lb == -INF and ub == INF:
            out.append(_line("FR", "BND", c))
            continue
        if lb == -INF:
            out.append(_line("MI", "BND", c))
        elif lb != 0 or v.integer:
            out.append(_line("LO", "BND", c, _fmt(lb)))
        if ub != INF:
            out.append(_line("UP", "BND", c, _fmt(ub)))
        elif v.integer:
            # some readers default integer columns to [0, 1]
            out.append(_line("PL", "BND", c))
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def _value(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return Fraction(float(text))


def read_mps(text: str) -> LinearModel:
    """Parse MPS text (fixed or whitespace-separated fields) into a model.

    Original names are restored from the comment map written by
    :func:`write_mps` when present.
    """
    names: dict[str, str] = {}
    section = None
    model_name = "model"
    row_sense: dict[str, str] = {}
    row_order: list[str] = []
    obj_row = None
    columns: dict[str, dict] = {}
    col_order: list[str] = []
    rhs: dict[str, object] = {}
    bounds: dict[str, list] = {}
    integer = False
    for raw in text.splitlines():
        if not raw.strip():
            continue
        if raw.startswith("*"):
            parts = raw[1:].split(maxsplit=1)
            if len(parts) == 2 and (parts[0] == "model" or parts[0][:1] in "RC" and parts[0][1:].isdigit()):
                names[parts[0]] = parts[1].strip()
            continue
        if not raw[0].isspace():
            head = raw.split()
            section = head[0]
            if section == "NAME" and len(head) > 1:
                model_name = head[1]
            if section == "ENDATA":
                break
            continue
        f = raw.split()
        if section == "ROWS":
            kind, name = f
            if kind == "N":
                if obj_row is None:
                    obj_row = name
            else:
                row_sense[name] = _SENSE[kind]
                row_order.append(name)
        elif section == "COLUMNS":
            if len(f) >= 3 and f[1] == "'MARKER'":
                integer = f[2] == "'INTORG'"
                continue
            col = f[0]
            if col not in columns:
                columns[col] = {"integer": integer, "coeffs": {}}
                col_order.append(col)
            for a in range(1, len(f) - 1, 2):
                columns[col]["coeffs"][f[a]] = _value(f[a + 1])
        elif section == "RHS":
            for a in range(1, len(f) - 1, 2):
                rhs[f[a]] = _value(f[a + 1])
        elif section == "BOUNDS":
            bounds.setdefault(f[2], []).append((f[0], _value(f[3]) if len(f) > 3 else None))

    model = LinearModel(names.get("model", model_name))
    index = {}
    for col in col_order:
        info = columns[col]
        lb, ub = 0, INF
        for kind, val in bounds.get(col, []):
            if kind == "UP":
                ub = val
                if val < 0 and lb == 0:
                    lb = -INF
            elif kind == "LO":
                lb = val
            elif kind == "FX":
                lb = ub = val
            elif kind == "FR":
                lb, ub = -INF, INF
            elif kind == "MI":
                lb = -INF
            elif kind == "PL":
                ub = INF
            elif kind == "BV":
                lb, ub = 0, 1
                info["integer"] = True
        index[col] = model.add_var(names.get(col, col), lb, ub, info["integer"],
                                   info["coeffs"].get(obj_row, 0))
    rows: dict[str, dict] = {r: {} for r in row_order}
    for col in col_order:
        for r, a in columns[col]["coeffs"].items():
            if r != obj_row:
                rows[r][index[col]] = a
    for r in row_order:
        model.add_constraint(rows[r], row_sense[r], rhs.get(r, 0), names.get(r, r))
    return model
