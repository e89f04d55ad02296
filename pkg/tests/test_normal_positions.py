import itertools

import pytest
from hypothesis import given, strategies as st

from gmspp.instance import make_instance
from gmspp.normal_positions import build_table, coverage, normal_positions, subset_sums


def brute_positions(widths, j, W):
    others = [w for k, w in enumerate(widths) if k != j]
    sums = {sum(c) for r in range(len(others) + 1) for c in itertools.combinations(others, r)}
    return sorted(p for p in sums if p <= W - widths[j])


def test_examples():
    assert normal_positions([3, 4], 0, 10) == [0, 4]
    assert normal_positions([5], 0, 10) == [0]
    assert normal_positions([2, 2, 3], 2, 7) == [0, 2, 4]


def test_subset_sums_negative_cap():
    assert subset_sums([1, 2], -1) == []


def test_coverage_examples():
    inst = make_instance([(3, 1), (4, 1)], [(10, 1)])
    table = build_table(inst)
    assert table[0, 0] == (0, 4)
    assert coverage(table, 0, 0, 5) == [4]
    assert coverage(table, 0, 0, 9) == []
    inst = make_instance([(2, 1), (2, 1), (3, 1)], [(7, 1)])
    table = build_table(inst)
    assert table.coverage(0, 2, 3) == [2]
    assert table.coverage(0, 2, 4) == [2, 4]


def test_coverage_out_of_range():
    table = build_table(make_instance([(3, 1)], [(5, 1)]))
    with pytest.raises(IndexError):
        coverage(table, 0, 0, 5)


def test_infeasible_pairs_are_empty():
    table = build_table(make_instance([(8, 1), (2, 1)], [(5, 1), (10, 1)]))
    assert table[0, 0] == ()
    assert table[1, 0] == (0, 2)


@given(widths=st.lists(st.integers(1, 9), min_size=1, max_size=12), W=st.integers(1, 40))
def test_dp_matches_brute_force(widths, W):
    for j in range(len(widths)):
        if widths[j] <= W:
            assert normal_positions(widths, j, W) == brute_positions(widths, j, W)


@given(sizes=st.lists(st.tuples(st.integers(1, 6), st.integers(1, 3)), min_size=1, max_size=7),
       Wa=st.integers(6, 15), extra=st.integers(0, 10))
def test_table_invariants(sizes, Wa, extra):
    inst = make_instance(sizes, [(Wa, 1), (Wa + extra, 1)])
    table = build_table(inst)
    for j, it in enumerate(inst.items):
        small, big = table[0, j], table[1, j]
        # monotone in strip width
        assert set(small) <= set(big)
        for i in inst.feasible_strips(j):
            ps = table[i, j]
            W = inst.strips[i].W
            assert ps[0] == 0 and all(0 <= p <= W - it.w for p in ps)
            # each position covers exactly w consecutive columns
            for p in ps:
                cols = [q for q in range(W) if p in coverage(table, i, j, q)]
                assert cols == list(range(p, p + it.w))
