import itertools
import random

import pytest
from hypothesis import given, strategies as st

from gmspp.bendm import SolveConfig, _BendmCallback
from gmspp.cuts import (CUT_LOG_HEADER, BendersCut, CutStage, CutTerm, NoConflicts, build_conflicts,
                        combinatorial_cut, intervals_keep_conflicts, lift_intervals, lifted_cut,
                        minimal_infeasible_subset, next_height, standard_cut, validate_cut)
from gmspp.formulations import build_master
from gmspp.instance import make_instance
from gmspp.normal_positions import build_table
from gmspp.ycheck import PlacedItem, YCheckInstance, oracle_ycheck, share_column, ycheck

# seven items on W=6 whose column loads peak at 4 but which need height 5
HARD = [(0, 1, 2), (3, 3, 2), (1, 3, 1), (2, 3, 1), (5, 1, 2), (1, 2, 1), (0, 2, 2)]
HARD_W, HARD_H = 6, 4


def hard_placement() -> YCheckInstance:
    return YCheckInstance(HARD_W, HARD_H, tuple(PlacedItem(j, p, w, h) for j, (p, w, h) in enumerate(HARD)))


def hard_instance():
    return make_instance([(w, h) for _, w, h in HARD], [(HARD_W, 1)], name="hard")


def master_candidate(inst, positions, heights):
    """Integral master point placing item j at positions[j] on strip 0."""
    table = build_table(inst)
    model, vm = build_master(inst, table)
    cand = [0.0] * model.num_vars
    for j, p in positions.items():
        cand[vm.x[0, j, p]] = 1.0
    for i, H in enumerate(heights):
        cand[vm.H[i]] = float(H)
    return model, vm, table, cand


def test_hard_placement_is_infeasible_at_its_load():
    yc = hard_placement()
    loads = [sum(it.h for it in yc.items if it.p <= q < it.p + it.w) for q in range(yc.W)]
    assert max(loads) == HARD_H
    assert not ycheck(yc).feasible and not oracle_ycheck(yc).feasible
    assert oracle_ycheck(yc.with_height(HARD_H + 1)).feasible


# ---------------------------------------------------------------- standard

def test_standard_cut_example():
    cut = standard_cut(0, [PlacedItem(0, 0, 2, 3), PlacedItem(1, 0, 2, 3)], 6)
    assert cut.threshold == 7 and cut.stage is CutStage.STANDARD
    assert [(t.j, t.lo, t.hi) for t in cut.terms] == [(0, 0, 0), (1, 0, 0)]
    # the candidate with both items at 0 and H = 6 has LHS 2*7 - 6 = 8 > 7
    assert not cut.holds({0: (0, 0), 1: (0, 0)}, 6)
    assert cut.holds({0: (0, 0), 1: (0, 0)}, 7)
    assert cut.holds({0: (0, 0), 1: (0, 1)}, 0)


def test_standard_cut_constraint_arithmetic():
    inst = make_instance([(2, 3), (2, 3)], [(4, 1)])
    model, vm, table, cand = master_candidate(inst, {0: 0, 1: 0}, [6])
    cut = standard_cut(0, [PlacedItem(0, 0, 2, 3), PlacedItem(1, 0, 2, 3)], 6)
    con = cut.to_constraint(model, vm.x, vm.H, table)
    assert con.activity(cand) == pytest.approx(8) and con.rhs == 7
    assert con.violation(cand) == pytest.approx(1)


def test_single_item_cut_forces_height():
    cut = standard_cut(0, [PlacedItem(0, 1, 2, 5)], 4)
    assert cut.threshold == 5
    assert not cut.holds({0: (0, 1)}, 4)
    assert cut.holds({0: (0, 1)}, 5)
    assert cut.holds({0: (0, 0)}, 1)


def test_next_height():
    assert next_height(6) == 7
    assert next_height(6.0000001) == 7
    assert next_height(5.5) == 7


def test_cut_validation_of_fields():
    with pytest.raises(ValueError):
        BendersCut(0, 0, (CutTerm(0, 0, 0),), CutStage.STANDARD)
    with pytest.raises(ValueError):
        BendersCut(0, 3, (), CutStage.STANDARD)


def test_log_line():
    cut = lifted_cut(1, {3: (0, 2), 5: (4, 4)}, 9)
    assert cut.log_line() == "1,lifted,9,2,3;5,0-2;4"
    assert CUT_LOG_HEADER.count(",") == cut.log_line().count(",")


# ---------------------------------------------------------------- MIS

def test_mis_excludes_tiny_item():
    W = 6
    items = tuple([PlacedItem(j, 0, W - 1, 3) for j in range(3)] + [PlacedItem(3, W - 1, 1, 1)])
    core = minimal_infeasible_subset(YCheckInstance(W, 5, items))
    assert 3 not in core and len(core) == 2
    sub = YCheckInstance(W, 5, tuple(it for it in items if it.j in core))
    assert not oracle_ycheck(sub).feasible


def test_mis_minimal_set_unchanged():
    items = (PlacedItem(0, 0, 3, 3), PlacedItem(1, 1, 3, 3))
    assert minimal_infeasible_subset(YCheckInstance(4, 5, items)) == [0, 1]


def test_mis_rejects_feasible():
    with pytest.raises(ValueError):
        minimal_infeasible_subset(YCheckInstance(4, 6, (PlacedItem(0, 0, 3, 3), PlacedItem(1, 1, 3, 3))))


def test_mis_of_hard_placement():
    yc = hard_placement()
    core = minimal_infeasible_subset(yc)
    sub = yc.restrict(core)
    assert not oracle_ycheck(sub).feasible
    for j in core:
        assert oracle_ycheck(sub.restrict([k for k in core if k != j])).feasible


def _random_infeasible(rng):
    while True:
        W = rng.randint(2, 8)
        items = []
        for j in range(rng.randint(2, 7)):
            w = rng.randint(1, W)
            items.append(PlacedItem(j, rng.randint(0, W - w), w, rng.randint(1, 4)))
        loads = [sum(it.h for it in items if it.p <= q < it.p + it.w) for q in range(W)]
        yc = YCheckInstance(W, max(loads) - rng.randint(0, 2), tuple(items))
        if yc.H >= 1 and not oracle_ycheck(yc).feasible:
            return yc


def test_mis_random_against_oracle():
    rng = random.Random(7)
    for _ in range(60):
        yc = _random_infeasible(rng)
        core = minimal_infeasible_subset(yc)
        assert set(core) <= {it.j for it in yc.items}
        sub = yc.restrict(core)
        assert not oracle_ycheck(sub).feasible
        for j in core:
            assert oracle_ycheck(sub.restrict([k for k in core if k != j])).feasible


# ---------------------------------------------------------------- conflicts and lifting

def test_conflict_examples():
    assert build_conflicts([PlacedItem(1, 0, 4, 1), PlacedItem(2, 2, 4, 1)]) == {1: {2}, 2: {1}}
    assert build_conflicts([PlacedItem(1, 0, 4, 1), PlacedItem(2, 4, 4, 1)]) == {1: set(), 2: set()}


@given(st.lists(st.tuples(st.integers(0, 8), st.integers(1, 5)), min_size=1, max_size=7))
def test_conflicts_match_interval_intersection(layout):
    items = [PlacedItem(j, p, w, 1) for j, (p, w) in enumerate(layout)]
    K = build_conflicts(items)
    for a, b in itertools.combinations(items, 2):
        shared = bool(set(range(a.p, a.p + a.w)) & set(range(b.p, b.p + b.w)))
        assert (b.j in K[a.j]) == shared == (a.j in K[b.j])


def _lifting_vertices(p, w, W):
    """Brute-force the two-item lifting LP over its integral box (vertices are integral here)."""
    best, arg = None, []
    for l1, l2 in itertools.product(range(p[0] + 1), range(p[1] + 1)):
        for r1, r2 in itertools.product(range(p[0], W - w[0] + 1), range(p[1], W - w[1] + 1)):
            if l1 + w[0] >= r2 + 1 and l2 + w[1] >= r1 + 1:
                val = (r1 - l1) + (r2 - l2)
                if best is None or val > best:
                    best, arg = val, [((l1, r1), (l2, r2))]
                elif val == best:
                    arg.append(((l1, r1), (l2, r2)))
    return best, arg


def test_lifting_example():
    items = [PlacedItem(1, 0, 4, 1), PlacedItem(2, 2, 4, 1)]
    res = lift_intervals(items, 10)
    best, optima = _lifting_vertices((0, 2), (4, 4), 10)
    assert best == 6 and res.lp_objective == pytest.approx(6)
    assert (res.intervals[1], res.intervals[2]) in optima
    assert res.intervals == {1: (0, 3), 2: (0, 3)}
    assert intervals_keep_conflicts(items, res.intervals)


def test_lifting_native_backend_agrees():
    items = [PlacedItem(1, 0, 4, 1), PlacedItem(2, 2, 4, 1)]
    assert lift_intervals(items, 10, backend="simplex").lp_objective == pytest.approx(6)


def test_lifting_without_conflicts():
    with pytest.raises(NoConflicts):
        lift_intervals([PlacedItem(0, 0, 2, 1), PlacedItem(1, 2, 2, 1)], 6)


def test_lifted_cut_support():
    inst = make_instance([(4, 1), (4, 1)], [(10, 1)])
    table = build_table(inst)
    cut = lifted_cut(0, {0: (0, 3), 1: (0, 3)}, 3)
    for j in (0, 1):
        assert {p for (_, jj, p) in cut.support(table) if jj == j} == {p for p in table[0, j] if p <= 3}


def test_degenerate_lift_equals_combinatorial():
    placed = [PlacedItem(0, 0, 3, 2), PlacedItem(1, 1, 3, 2)]
    comb = combinatorial_cut(0, placed, 4)
    lift = lifted_cut(0, {0: (0, 0), 1: (1, 1)}, 4)
    assert comb.terms == lift.terms and comb.threshold == lift.threshold


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(1, 4)), min_size=2, max_size=6),
       st.integers(0, 4))
def test_lifted_intervals_keep_every_conflict(layout, extra):
    W = max(p + w for p, w in layout) + extra
    items = [PlacedItem(j, p, w, 1) for j, (p, w) in enumerate(layout)]
    try:
        res = lift_intervals(items, W)
    except NoConflicts:
        assert not any(build_conflicts(items).values())
        return
    assert intervals_keep_conflicts(items, res.intervals)
    K = build_conflicts(items)
    for it in items:
        lo, hi = res.intervals[it.j]
        assert 0 <= lo <= it.p <= hi <= W - it.w
        if not K[it.j]:
            assert lo == hi == it.p
    # every integer placement inside the intervals keeps the original pairs
    w = {it.j: it.w for it in items}
    for j, ks in K.items():
        for k in ks:
            for xj in range(res.intervals[j][0], res.intervals[j][1] + 1):
                for xk in range(res.intervals[k][0], res.intervals[k][1] + 1):
                    assert share_column(xj, w[j], xk, w[k])


# ---------------------------------------------------------------- cuts from the hard placement

def _stage_cuts(yc):
    core = minimal_infeasible_subset(yc)
    placed = [it for it in yc.items if it.j in core]
    std = standard_cut(0, yc.items, yc.H)
    comb = combinatorial_cut(0, placed, yc.H + 1)
    lift = lifted_cut(0, lift_intervals(placed, yc.W).intervals, yc.H + 1)
    return std, comb, lift


def test_hard_cuts_validate_and_cut_candidate():
    yc = hard_placement()
    inst = hard_instance()
    positions = {it.j: it.p for it in yc.items}
    model, vm, table, cand = master_candidate(inst, positions, [yc.H])
    std, comb, lift = _stage_cuts(yc)
    for cut in (std, comb, lift):
        assert validate_cut(cut, inst).valid
        con = cut.to_constraint(model, vm.x, vm.H, table)
        assert con.violation(cand) >= 1 - 1e-9
        assert not cut.holds({j: (0, p) for j, p in positions.items()}, yc.H)
    assert set(comb.support(table)) <= set(std.support(table))
    assert len(comb.terms) <= len(std.terms)
    assert set(comb.support(table)) <= set(lift.support(table))


def test_corrupted_cut_fails_validation():
    yc = hard_placement()
    inst = hard_instance()
    _, comb, _ = _stage_cuts(yc)
    bad = BendersCut(0, comb.threshold + 1, comb.terms, comb.stage)
    check = validate_cut(bad, inst)
    assert not check.valid and check.counterexample is not None
    widened = BendersCut(0, comb.threshold, tuple(CutTerm(t.j, 0, HARD_W - inst.items[t.j].w)
                                                   for t in comb.terms), CutStage.LIFTED)
    assert not validate_cut(widened, inst).valid


def test_callback_emits_sound_cut_on_hard_candidate():
    yc = hard_placement()
    inst = hard_instance()
    positions = {it.j: it.p for it in yc.items}
    for stage in CutStage:
        model, vm, table, cand = master_candidate(inst, positions, [yc.H])
        cb = _BendmCallback(inst, model, vm, table, SolveConfig(cut_stage=stage))
        cons = cb(cand)
        assert len(cons) == 1 and len(cb.cut_log) == 1
        assert cb.cut_log[0].stage is stage
        assert cons[0].violation(cand) >= 1 - 1e-9
        assert validate_cut(cb.cut_log[0], inst).valid
        assert cb.best is None


def test_callback_accepts_feasible_candidate():
    yc = hard_placement()
    inst = hard_instance()
    positions = {it.j: it.p for it in yc.items}
    model, vm, table, cand = master_candidate(inst, positions, [yc.H + 1])
    cb = _BendmCallback(inst, model, vm, table, SolveConfig())
    assert cb(cand) == []
    assert cb.best_obj == 6 * (yc.H + 1)


def test_random_infeasible_cuts_are_sound():
    rng = random.Random(11)
    checked = 0
    for _ in range(25):
        yc = _random_infeasible(rng)
        inst = make_instance([(it.w, it.h) for it in yc.items], [(yc.W, 1)])
        table = build_table(inst)
        if any(it.p not in table[0, it.j] for it in yc.items):
            continue
        core = minimal_infeasible_subset(yc)
        placed = [it for it in yc.items if it.j in core]
        cuts = [standard_cut(0, yc.items, yc.H), combinatorial_cut(0, placed, yc.H + 1)]
        try:
            cuts.append(lifted_cut(0, lift_intervals(placed, yc.W).intervals, yc.H + 1))
        except NoConflicts:
            pass
        for cut in cuts:
            assert validate_cut(cut, inst).valid
        checked += 1
    assert checked >= 5
