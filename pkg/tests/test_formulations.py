from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeded_instance
from gmspp.formulations import (build_bigm, build_master, inject_lower_bound, lp_bigm_bound, lp_pc_bound,
                                objective_lattice)
from gmspp.instance import make_instance
from gmspp.mip import MipStatus, solve_mip
from gmspp.normal_positions import build_table
from gmspp.oracle import solve_exact

SMALL = [seeded_instance(s, n_range=(2, 4)) for s in range(12)]


def test_bigm_variable_counts():
    inst = make_instance([(5, 1), (2, 2), (6, 3)], [(5, 1), (6, 1)])
    model, vm = build_bigm(inst)
    feasible_pairs = sum(len(inst.feasible_strips(j)) for j in range(inst.n))
    assert len(vm.x) == len(vm.y) == len(vm.z) == feasible_pairs == 5
    assert len(vm.l) == len(vm.b) == inst.n * (inst.n - 1)
    assert len(vm.H) == inst.m
    assert model.num_vars == 3 * feasible_pairs + 2 * inst.n * (inst.n - 1) + inst.m
    assert (vm.M_x, vm.M_y) == (6, 6)


def test_bigm_constraint_families():
    inst = make_instance([(2, 1), (3, 2)], [(4, 1)])
    model, _ = build_bigm(inst)
    families = sorted({c.name.split("_")[0] for c in model.constraints})
    assert families == ["assign", "disj", "sepx", "sepy", "xfit", "xoff", "ylink", "yoff"]


def test_one_item_models():
    inst = make_instance([(3, 4)], [(5, 1)])
    for build in (build_bigm, build_master):
        model, _ = build(inst)
        assert solve_mip(model).objective == pytest.approx(20)


def test_master_variables_follow_table():
    inst = make_instance([(3, 1), (4, 2), (2, 2)], [(6, 1), (9, 1)])
    table = build_table(inst)
    model, vm = build_master(inst, table)
    assert set(vm.x) == {(i, j, p) for j in range(inst.n) for i in inst.feasible_strips(j) for p in table[i, j]}
    assert model.num_vars == table.count() + inst.m


@pytest.mark.parametrize("inst", SMALL, ids=lambda i: i.name)
def test_bounds_and_models_against_oracle(inst):
    opt = float(solve_exact(inst).objective)
    lattice = float(objective_lattice(inst))
    bigm, _ = build_bigm(inst)
    res = solve_mip(bigm, objective_step=lattice)
    assert res.status is MipStatus.OPTIMAL and res.objective == pytest.approx(opt)
    master, _ = build_master(inst)
    assert solve_mip(master).objective <= opt + 1e-6
    pc = lp_pc_bound(inst)
    assert pc <= opt + 1e-6
    assert lp_bigm_bound(inst) <= opt + 1e-6
    le = solve_mip(inject_lower_bound(bigm, pc), objective_step=lattice)
    assert le.objective == pytest.approx(opt)
    assert le.bound >= pc - 1e-6


def test_inject_lower_bound_copies():
    inst = make_instance([(2, 2)], [(4, 1)])
    model, _ = build_bigm(inst)
    rows = model.num_constraints
    out = inject_lower_bound(model, 3)
    assert model.num_constraints == rows and out.num_constraints == rows + 1
    assert out.constraints[-1].coeffs == model.objective_row()


def test_objective_lattice():
    assert objective_lattice(make_instance([(1, 1)], [(4, 1), (6, 1)])) == 2
    assert objective_lattice(make_instance([(1, 1)], [(200, 1), (240, Fraction(11, 10))])) == 8
    assert objective_lattice(make_instance([(1, 1)], [(7, Fraction(6, 5))])) == Fraction(42, 5)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.integers(1, 300), st.fractions(min_value=Fraction(1, 10), max_value=3,
                                                            max_denominator=10)), min_size=1, max_size=3),
       st.lists(st.integers(0, 20), min_size=3, max_size=3))
def test_lattice_divides_objectives(strips, heights):
    inst = make_instance([(1, 1)], strips)
    g = objective_lattice(inst)
    total = sum(s.area_cost * h for s, h in zip(inst.strips, heights))
    assert (total / g).denominator == 1
