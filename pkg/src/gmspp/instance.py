"""Problem data: items, strips, GMSPP instances and their text/JSON formats."""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional


class InstanceError(ValueError):
    """Raised for malformed instance data (parse or schema errors)."""


@dataclass(frozen=True)
class Item:
    id: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise InstanceError(f"item {self.id}: dimensions must be positive, got {self.w}x{self.h}")

    @property
    def area(self) -> int:
        return self.w * self.h


@dataclass(frozen=True)
class Strip:
    id: int
    W: int
    C: Fraction

    def __post_init__(self):
        if self.W < 1:
            raise InstanceError(f"strip {self.id}: width must be positive, got {self.W}")
        object.__setattr__(self, "C", Fraction(self.C))
        if self.C <= 0:
            raise InstanceError(f"strip {self.id}: unit-area cost must be positive, got {self.C}")

    @property
    def area_cost(self) -> Fraction:
        """Cost per unit of strip height, C_i * W_i."""
        return self.C * self.W


class CostScheme(enum.Enum):
    PROPORTIONAL = "prop"
    ECONOMIES = "econ"
    DISECONOMIES = "disecon"

    @classmethod
    def parse(cls, text: str) -> "CostScheme":
        key = text.strip().lower()
        aliases = {
            "prop": cls.PROPORTIONAL, "proportional": cls.PROPORTIONAL,
            "econ": cls.ECONOMIES, "economies": cls.ECONOMIES,
            "disecon": cls.DISECONOMIES, "diseconomies": cls.DISECONOMIES,
        }
        if key not in aliases:
            raise ValueError(f"unknown cost scheme {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class Instance:
    """A GMSPP instance. Strips are kept sorted by nondecreasing width."""

    items: tuple[Item, ...]
    strips: tuple[Strip, ...]
    name: str = "instance"

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "strips", tuple(self.strips))
        if not self.strips:
            raise InstanceError("instance has no strips")
        for k, it in enumerate(self.items):
            if it.id != k:
                raise InstanceError(f"item ids must be 0..n-1 in order, got {it.id} at {k}")
        for k, st in enumerate(self.strips):
            if st.id != k:
                raise InstanceError(f"strip ids must be 0..m-1 in order, got {st.id} at {k}")
        widths = [s.W for s in self.strips]
        if widths != sorted(widths):
            raise InstanceError(f"strips must be sorted by width, got {widths}")
        widest = widths[-1]
        for it in self.items:
            if it.w > widest:
                raise InstanceError(f"item {it.id} (w={it.w}) fits on no strip (max width {widest})")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def m(self) -> int:
        return len(self.strips)

    def feasible_strips(self, j: int) -> list[int]:
        return feasible_strips(self, j)

    def total_area(self) -> int:
        return sum(it.area for it in self.items)


@dataclass(frozen=True)
class BaseSpp:
    """A single-strip packing benchmark: n items and strip width W."""

    W: int
    items: tuple[Item, ...]
    name: str = "spp"

    @property
    def n(self) -> int:
        return len(self.items)


def feasible_strips(inst: Instance, j: int) -> list[int]:
    """Strips wide enough for item ``j``, in ascending id order."""
    if not 0 <= j < inst.n:
        raise IndexError(f"item index {j} out of range")
    w = inst.items[j].w
    return [s.id for s in inst.strips if w <= s.W]


def make_instance(sizes: Iterable[tuple[int, int]], strips: Iterable[tuple[int, object]],
                  name: str = "instance") -> Instance:
    """Convenience constructor from ``(w, h)`` pairs and ``(W, C)`` pairs.

    Strips are sorted by width (stable, so equal widths keep input order).
    """
    items = tuple(Item(k, int(w), int(h)) for k, (w, h) in enumerate(sizes))
    ordered = sorted(strips, key=lambda s: s[0])
    return Instance(items, tuple(Strip(k, int(W), Fraction(C)) for k, (W, C) in enumerate(ordered)), name)


# --------------------------------------------------------------------------
# SPP benchmark files
# --------------------------------------------------------------------------

def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise InstanceError(f"line {lineno}: non-integer field in {line.strip()!r}") from None


def parse_spp(text: str, name: str = "spp") -> BaseSpp:
    """Parse a plain-text strip packing benchmark.

    Layout: item count, strip width, then one line per item holding either
    ``index width height`` or ``width height``. Blank lines are ignored.
    """
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if len(lines) < 2:
        raise InstanceError("file too short: need item count and strip width")
    lineno, ln = lines[0]
    head = _ints(ln, lineno)
    if len(head) != 1 or head[0] < 0:
        raise InstanceError(f"line {lineno}: expected a single item count")
    n = head[0]
    lineno, ln = lines[1]
    head = _ints(ln, lineno)
    if len(head) != 1 or head[0] < 1:
        raise InstanceError(f"line {lineno}: expected a single positive strip width")
    W = head[0]
    body = lines[2:]
    if len(body) != n:
        raise InstanceError(f"item count mismatch: header says {n}, found {len(body)} item lines")
    items = []
    for k, (lineno, ln) in enumerate(body):
        fields = _ints(ln, lineno)
        if len(fields) == 3:
            w, h = fields[1], fields[2]
        elif len(fields) == 2:
            w, h = fields
        else:
            raise InstanceError(f"line {lineno}: expected 'index width height' or 'width height'")
        if w < 1 or h < 1:
            raise InstanceError(f"line {lineno}: dimensions must be positive")
        if w > W:
            if h <= W:
                raise InstanceError(
                    f"line {lineno}: item width {w} exceeds strip width {W} but its height {h} "
                    "would fit; the width/height columns look swapped")
            raise InstanceError(f"line {lineno}: item width {w} exceeds strip width {W}")
        items.append(Item(k, w, h))
    return BaseSpp(W, tuple(items), name)


def format_spp(base: BaseSpp) -> str:
    rows = [str(base.n), str(base.W)]
    rows += [f"{it.id + 1} {it.w} {it.h}" for it in base.items]
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# GMSPP derivation
# --------------------------------------------------------------------------

WIDTH_RATIOS = {2: (Fraction(1), Fraction(6, 5)), 3: (Fraction(4, 5), Fraction(1), Fraction(6, 5))}
COST_STEP = Fraction(1, 10)


def scheme_costs(scheme: CostScheme, m: int) -> list[Fraction]:
    """Unit-area costs for ``m`` strips sorted by ascending width."""
    if scheme is CostScheme.PROPORTIONAL:
        return [Fraction(1)] * m
    if scheme is CostScheme.ECONOMIES:
        # widest strip costs 1, each narrower one step more
        return [1 + COST_STEP * (m - 1 - i) for i in range(m)]
    return [1 + COST_STEP * i for i in range(m)]


def generate_gmspp(base: BaseSpp, m: int, scheme: CostScheme) -> Instance:
    if m not in WIDTH_RATIOS:
        raise ValueError(f"m must be 2 or 3, got {m}")
    # ratios are exact fractions so floor(r*W) has no float error
    widths = sorted(math.floor(r * base.W) for r in WIDTH_RATIOS[m])
    costs = scheme_costs(scheme, m)
    strips = tuple(Strip(i, W, C) for i, (W, C) in enumerate(zip(widths, costs)))
    return Instance(base.items, strips, f"{base.name}_m{m}_{scheme.value}")


def random_instance(rng: random.Random, n: int, m: int, *, max_width: int = 12, max_dim: int = 6,
                    scheme: CostScheme = CostScheme.PROPORTIONAL, name: Optional[str] = None) -> Instance:
    """Small random instance for property tests: strip widths <= max_width, item dims <= max_dim."""
    sizes = [(rng.randint(1, max_dim), rng.randint(1, max_dim)) for _ in range(n)]
    need = max(w for w, _ in sizes)
    widths = sorted(rng.randint(2, max_width) for _ in range(m))
    if widths[-1] < need:
        widths[-1] = rng.randint(need, max_width)
    costs = scheme_costs(scheme, m)
    items = tuple(Item(k, w, h) for k, (w, h) in enumerate(sizes))
    strips = tuple(Strip(i, W, C) for i, (W, C) in enumerate(zip(widths, costs)))
    return Instance(items, strips, name or f"rand_n{n}_m{m}_{scheme.value}")


# --------------------------------------------------------------------------
# JSON persistence
# --------------------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InstanceError(f"expected a rational string like '11/10', got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"bad rational {text!r}") from None


def instance_to_dict(inst: Instance) -> dict:
    return {
        "name": inst.name,
        "items": [{"w": it.w, "h": it.h} for it in inst.items],
        "strips": [{"W": s.W, "C": _frac_str(s.C)} for s in inst.strips],
    }


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance JSON must be an object")
    for key in ("name", "items", "strips"):
        if key not in data:
            raise InstanceError(f"instance JSON missing {key!r}")
    try:
        items = tuple(Item(k, _int_field(d, "w"), _int_field(d, "h")) for k, d in enumerate(data["items"]))
        strips = tuple(Strip(k, _int_field(d, "W"), parse_fraction(d["C"]))
                       for k, d in enumerate(data["strips"]))
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"instance JSON schema violation: {exc}") from None
    return Instance(items, strips, str(data["name"]))


def _int_field(d: dict, key: str) -> int:
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceError(f"field {key!r} must be an integer, got {v!r}")
    return v


def save_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1)


def load_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return instance_from_dict(data)
