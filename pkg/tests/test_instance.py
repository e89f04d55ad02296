import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gmspp.instance import (BaseSpp, CostScheme, Instance, InstanceError, Item, Strip, feasible_strips, format_spp,
                            generate_gmspp, load_instance, make_instance, parse_spp, save_instance)


def base(W, sizes, name="b"):
    return BaseSpp(W, tuple(Item(k, w, h) for k, (w, h) in enumerate(sizes)), name)


def test_parse_three_field_layout():
    b = parse_spp("2\n10\n1 3 4\n2 5 2\n")
    assert b.n == 2 and b.W == 10
    assert [(it.w, it.h) for it in b.items] == [(3, 4), (5, 2)]
    assert [it.id for it in b.items] == [0, 1]


def test_parse_two_field_layout():
    b = parse_spp("2\n10\n3 4\n5 2\n")
    assert [(it.w, it.h) for it in b.items] == [(3, 4), (5, 2)]


def test_parse_item_wider_than_strip():
    with pytest.raises(InstanceError, match="line 3"):
        parse_spp("1\n5\n1 6 2\n")


def test_parse_swapped_columns_are_diagnosed():
    # widths 3 and 2 fit W=5 only when the last two columns are read swapped
    with pytest.raises(InstanceError, match="swapped"):
        parse_spp("2\n5\n1 9 3\n2 8 2\n")


@pytest.mark.parametrize("text", ["2\n10\n1 3 4\n", "x\n10\n", "1\n10\n1 3 a\n", "1\n10\n1 0 3\n"])
def test_parse_errors(text):
    with pytest.raises(InstanceError):
        parse_spp(text)


def test_format_parse_round_trip():
    b = base(10, [(3, 4), (5, 2), (10, 1)])
    again = parse_spp(format_spp(b), name="b")
    assert [(it.w, it.h) for it in again.items] == [(3, 4), (5, 2), (10, 1)]


def test_generate_m2_proportional():
    inst = generate_gmspp(base(200, [(10, 10)]), 2, CostScheme.PROPORTIONAL)
    assert [s.W for s in inst.strips] == [200, 240]
    assert [s.C for s in inst.strips] == [1, 1]
    assert inst.name == "b_m2_prop"


def test_generate_m3_economies():
    inst = generate_gmspp(base(200, [(10, 10)]), 3, CostScheme.ECONOMIES)
    assert [s.W for s in inst.strips] == [160, 200, 240]
    assert [s.C for s in inst.strips] == [Fraction(6, 5), Fraction(11, 10), 1]


def test_generate_m2_diseconomies():
    inst = generate_gmspp(base(200, [(10, 10)]), 2, CostScheme.DISECONOMIES)
    assert [s.C for s in inst.strips] == [1, Fraction(11, 10)]


def test_generate_rejects_bad_m():
    with pytest.raises(ValueError):
        generate_gmspp(base(200, [(10, 10)]), 4, CostScheme.PROPORTIONAL)


def test_feasible_strips():
    inst = generate_gmspp(base(200, [(200, 1), (1, 1)]), 3, CostScheme.PROPORTIONAL)
    assert feasible_strips(inst, 0) == [1, 2]
    assert feasible_strips(inst, 1) == [0, 1, 2]
    inst2 = make_instance([(240, 1)], [(200, 1), (240, 1)])
    assert feasible_strips(inst2, 0) == [1]


def test_instance_rejects_unsorted_or_unpackable():
    with pytest.raises(InstanceError):
        Instance((Item(0, 3, 3),), (Strip(0, 10, Fraction(1)), Strip(1, 5, Fraction(1))))
    with pytest.raises(InstanceError):
        make_instance([(30, 3)], [(10, 1)])


def test_save_load_exact_rational():
    inst = generate_gmspp(base(200, [(10, 10), (30, 7)]), 3, CostScheme.ECONOMIES)
    text = save_instance(inst)
    assert '"11/10"' in text
    again = load_instance(text)
    assert again == inst
    assert again.strips[1].C == Fraction(11, 10)


def test_load_missing_strips():
    with pytest.raises(InstanceError):
        load_instance(json.dumps({"name": "x", "items": [{"w": 1, "h": 1}]}))


@given(W=st.integers(2, 300),
       sizes=st.lists(st.tuples(st.integers(1, 300), st.integers(1, 50)), min_size=1, max_size=8),
       m=st.sampled_from([2, 3]), scheme=st.sampled_from(list(CostScheme)))
def test_generated_instances_are_consistent(W, sizes, m, scheme):
    sizes = [(min(w, W), h) for w, h in sizes]
    inst = generate_gmspp(base(W, sizes), m, scheme)
    ratios = {2: (Fraction(1), Fraction(6, 5)), 3: (Fraction(4, 5), Fraction(1), Fraction(6, 5))}[m]
    assert [s.W for s in inst.strips] == [(r * W).__floor__() for r in ratios]
    assert all(inst.feasible_strips(j) for j in range(inst.n))
    assert load_instance(save_instance(inst)) == inst
