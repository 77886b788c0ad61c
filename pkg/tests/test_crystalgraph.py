from __future__ import annotations

from collections import Counter

import pytest

from pathcrystal.crystalgraph import (
    BudgetExceeded,
    Crystal,
    CrystalError,
    bisimulate,
    character_decompose,
    closure,
    crystals_isomorphic,
    demazure_generate,
    demazure_set,
    dominant_elements,
    highest_weight_crystal,
    ls_paths,
    prefix,
    tensor_concat,
)
from pathcrystal.pathspace import Path, concat, finite_step, is_dominant, lambda0, lower_f, raise_e, straight
from pathcrystal.rootsystem import build_root_system

A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)


@pytest.mark.parametrize(
    "key,lam",
    [(("A", 2), (1, 1)), (("A", 2), (2, 0)), (("B", 2), (1, 1)), (("C", 2), (0, 2)),
     (("G", 2), (1, 0)), (("G", 2), (0, 1)), (("B", 3), (0, 0, 1)), (("D", 4), (0, 1, 0, 0))],
)
def test_closure_matches_dimension_and_ls(key, lam):
    R = build_root_system(*key)
    c = highest_weight_crystal(R, lam)
    assert len(c) == R.weyl_dimension(lam)
    assert set(c.nodes) == ls_paths(R, lam)
    assert dominant_elements(c) == [straight(finite_step(lam))]


def test_edges_are_inverse():
    c = highest_weight_crystal(B2, (1, 1))
    for i in c.index_set:
        for p, q in c.f_edges[i].items():
            assert c.e_edges[i][q] == p
    lazy = Crystal(B2, c.nodes, c.index_set)
    assert lazy.f_edges == c.f_edges
    assert lazy.e_edges == c.e_edges


def test_json_round_trip_and_dot():
    c = highest_weight_crystal(A2, (1, 0))
    data = c.to_json()
    assert [n for n in data["nodes"]] == [p.to_json() for p in c.sorted_nodes()]
    back = Crystal.from_json(data)
    assert back.nodes == c.nodes and back.f_edges == c.f_edges
    dot = c.to_dot()
    assert dot.count("->") == 4
    assert dot == Crystal.from_json(data).to_dot()


def test_demazure_words():
    top = straight(finite_step((1, 1)))
    assert demazure_set(A2, [top], []) == {top}
    full = demazure_set(A2, [top], A2.w0)
    assert full == set(highest_weight_crystal(A2, (1, 1)).nodes)
    c = demazure_generate(A2, top, [2, 1])
    # f_1 string of theta has 2 elements; their f_2 strings add 1 and 2 more
    assert len(c) == 5
    assert c.index_set == (1, 2)


def test_character_decompose_tensor_square():
    b = highest_weight_crystal(A2, (1, 0))
    t = tensor_concat(b, b)
    d = character_decompose(t)
    assert d.components == Counter({(2, 0): 1, (0, 1): 1})
    assert sum(d.weights.values()) == 9
    assert d.component_list()[0] == ((2, 0), 1)


def test_tensor_concat_closedness_detected():
    b = highest_weight_crystal(A2, (1, 0))
    partial = Crystal(A2, frozenset(list(b.nodes)[:2]), b.index_set)
    with pytest.raises(CrystalError):
        tensor_concat(partial, b)


def test_isomorphism_of_different_seeds():
    # a dominant path of weight varpi_1 + varpi_2 inside B(varpi_1) * B(varpi_2)
    seed = Path([finite_step((1, 0)), finite_step((0, 1))])
    assert is_dominant(A2, seed)
    other = closure(A2, [seed], ops="f")
    straight_line = highest_weight_crystal(A2, (1, 1))
    assert other.nodes != straight_line.nodes
    assert crystals_isomorphic(other, straight_line)
    assert not crystals_isomorphic(highest_weight_crystal(A2, (2, 0)), highest_weight_crystal(A2, (0, 2)))


def test_isomorphism_requires_single_source():
    b = highest_weight_crystal(A2, (1, 0))
    t = tensor_concat(b, b)
    with pytest.raises(CrystalError):
        crystals_isomorphic(t, t)


def test_bisimulate_depth():
    p0 = Path([lambda0(A2)])

    def step(p, i, d):
        return lower_f(A2, p, i) if d == "f" else raise_e(A2, p, i)

    res = bisimulate(p0, step, lambda p: p.weight, p0, step, lambda p: p.weight, (0, 1, 2), depth=3)
    assert res.ok and res.matched > 1
    bad = bisimulate(p0, step, lambda p: p.weight, p0, step, lambda p: (), (0, 1, 2), depth=1)
    assert not bad


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        highest_weight_crystal(A2, (3, 3), budget=10)
    assert info.value.stats["nodes"] > 10


def test_prefix():
    b = highest_weight_crystal(A2, (1, 0))
    head = Path([lambda0(A2)])
    c = prefix(head, b, (0, 1, 2))
    assert len(c) == 3
    assert all(p.steps[0] == lambda0(A2) for p in c.nodes)
    assert concat(head, straight(finite_step((1, 0)))) in c


def test_ls_two_piece_rational_cuts():
    # B2 adjoint-like weight: paths with half-integral cuts
    paths = ls_paths(B2, (0, 2))
    assert len(paths) == B2.weyl_dimension((0, 2))
    assert any(len(p) == 2 for p in paths)
