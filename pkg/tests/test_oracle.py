import itertools
import random
from fractions import Fraction

import pytest

from gmspp.bendm import verify_packing
from gmspp.instance import Instance, Item, Strip, make_instance
from gmspp.oracle import OracleGuardError, solve_exact, strip_min_height

from conftest import seeded_instance


def naive_strip_height(W, dims):
    """Smallest height over every integer (x, y) grid placement; only for a handful of items."""
    total = sum(h for _, h in dims)
    best = total
    cells = [[(x, y) for x in range(W - w + 1) for y in range(total - h + 1)] for w, h in dims]
    for combo in itertools.product(*cells):
        top = max(y + h for (_, y), (_, h) in zip(combo, dims))
        if top >= best:
            continue
        ok = True
        for a, b in itertools.combinations(range(len(dims)), 2):
            (xa, ya), (wa, ha) = combo[a], dims[a]
            (xb, yb), (wb, hb) = combo[b], dims[b]
            if xa < xb + wb and xb < xa + wa and ya < yb + hb and yb < ya + ha:
                ok = False
                break
        if ok:
            best = top
    return best


def test_single_item_goes_to_narrow_strip():
    inst = make_instance([(3, 4)], [(5, 1), (6, 1)])
    res = solve_exact(inst)
    assert res.objective == 20
    assert res.packing.placements[0].strip == 0


def test_forced_stack():
    res = solve_exact(make_instance([(5, 2), (5, 3)], [(5, 1)]))
    assert res.objective == 25 and res.heights == [5]


def test_guard():
    with pytest.raises(OracleGuardError):
        solve_exact(make_instance([(1, 1)] * 8, [(4, 1)]))
    with pytest.raises(OracleGuardError):
        solve_exact(make_instance([(1, 1)], [(4, 1)] * 4))


def test_rational_costs():
    inst = make_instance([(2, 3)], [(4, Fraction(11, 10))])
    assert solve_exact(inst).objective == Fraction(132, 10)


@pytest.mark.parametrize("seed", range(12))
def test_strip_height_matches_grid_search(seed):
    rng = random.Random(seed)
    W = rng.randint(2, 5)
    dims = tuple((rng.randint(1, W), rng.randint(1, 3)) for _ in range(rng.randint(1, 3)))
    H, xy = strip_min_height(W, dims)
    assert H == naive_strip_height(W, dims)
    assert max(y + h for (_, y), (_, h) in zip(xy, dims)) == H


@pytest.mark.parametrize("seed", range(15))
def test_normal_positions_lose_nothing(seed):
    inst = seeded_instance(1000 + seed, n_range=(2, 4))
    assert solve_exact(inst).objective == solve_exact(inst, normal=False).objective


@pytest.mark.parametrize("seed", range(20))
def test_packing_verifies_and_separates(seed):
    inst = seeded_instance(seed)
    res = solve_exact(inst)
    check = verify_packing(inst, res.packing)
    assert check.ok and check.objective == res.objective
    # per-strip heights are each minimal for the items assigned there
    for i, strip in enumerate(inst.strips):
        members = sorted(j for j, pl in res.packing.placements.items() if pl.strip == i)
        dims = tuple((inst.items[j].w, inst.items[j].h) for j in members)
        assert res.heights[i] == strip_min_height(strip.W, dims)[0]


def test_assignment_enumeration_against_strip_heights():
    inst = Instance((Item(0, 2, 2), Item(1, 2, 2), Item(2, 3, 1)),
                    (Strip(0, 3, Fraction(1)), Strip(1, 4, Fraction(1))), "t")
    best = None
    for assign in itertools.product(*(inst.feasible_strips(j) for j in range(inst.n))):
        total = 0
        for i, s in enumerate(inst.strips):
            dims = tuple((inst.items[j].w, inst.items[j].h) for j in range(inst.n) if assign[j] == i)
            total += s.W * s.C * (naive_strip_height(s.W, dims) if dims else 0)
        best = total if best is None else min(best, total)
    assert solve_exact(inst).objective == best
