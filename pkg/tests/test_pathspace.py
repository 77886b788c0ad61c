from __future__ import annotations

from fractions import Fraction as F

import pytest

from pathcrystal.pathspace import (
    Path,
    affine_simple_root,
    concat,
    epsilon,
    finite_step,
    height_profile,
    is_dominant,
    is_integral,
    is_neutral,
    lambda0,
    lower_f,
    pair,
    path_weight,
    phi,
    raise_e,
    reflect,
    straight,
    word_map,
)
from pathcrystal.rootsystem import build_root_system

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
E6 = build_root_system("E", 6)


def fin(*c):
    return finite_step(c)


def test_canonical_form():
    p = Path([(0, 1), (0, 0), (0, 2), (0, -1)])
    assert p.steps == ((0, 3), (0, -1))
    assert Path([(0, F(1, 2)), (0, F(1, 2))]) == straight((0, 1))
    # opposite directions never merge
    assert len(Path([(0, 1), (0, -1)])) == 2
    assert Path([]) == Path([(0, 0)])
    assert Path([(0, F(4, 2))]).steps == ((0, 2),)
    assert type(Path([(0, F(4, 2))]).steps[0][1]) is int


def test_concat_and_hash():
    a = Path([fin(1, 0)])
    b = Path([fin(1, 0), fin(-1, 1)])
    assert concat(a, a) == Path([fin(2, 0)])
    assert hash(a * b) == hash(Path([fin(2, 0), fin(-1, 1)]))
    assert a < b or b < a


def test_a1_operators():
    w = straight(fin(1))
    assert lower_f(A1, w, 1) == straight(fin(-1))
    assert raise_e(A1, straight(fin(-1)), 1) == w
    assert lower_f(A1, straight(fin(-1)), 1) is None
    assert raise_e(A1, w, 1) is None
    l0 = Path([lambda0(A1)])
    f0 = lower_f(A1, l0, 0)
    assert f0 == Path([(1, 2)])
    assert raise_e(A1, f0, 0) == l0


def test_height_profile():
    p = Path([fin(1), fin(-1)])
    assert height_profile(A1, p, 1) == [(0, 0), (F(1, 2), 1), (1, 0)]
    assert height_profile(A1, Path(), 1) == [(0, 0), (1, 0)]
    # index 0 at level one
    q = Path([lambda0(A1), fin(1)])
    assert [h for _, h in height_profile(A1, q, 0)] == [0, 1, 0]


def test_pairing_and_reflection():
    assert pair(A2, 0, lambda0(A2)) == 1
    assert pair(A2, 0, fin(1, 1)) == -2
    assert affine_simple_root(A2, 0) == (0, -1, -1)
    v = lambda0(A2)
    assert reflect(A2, 0, v) == (1, 1, 1)
    assert reflect(A2, 0, (1, 1, 0)) == (1, 1, 0)
    assert reflect(A2, 0, reflect(A2, 0, v)) == v
    assert word_map(A2, [1, 2])(fin(1, 0)) == fin(-1, 1)
    assert word_map(A2, [2, 1])(fin(1, 0)) == fin(0, -1)


def test_two_piece_path_in_a2():
    theta = straight(fin(1, 1))
    p = lower_f(A2, lower_f(A2, theta, 1), 2)
    half_alpha2 = (0, F(-1, 2), 1)
    assert p == Path([tuple(-x for x in half_alpha2), half_alpha2])
    assert not is_integral(p)
    assert path_weight(p) == (0, 0, 0)


def test_weights_and_strings():
    p = straight(fin(2, 0))
    assert phi(A2, p, 1) == 2 and epsilon(A2, p, 1) == 0
    q = lower_f(A2, p, 1)
    assert path_weight(q) == (0, 0, 1)
    assert phi(A2, q, 1) - epsilon(A2, q, 1) == q.weight[1]
    assert path_weight(Path(), A2) == (0, 0, 0)


def test_dominance_and_neutrality():
    pi3 = Path([fin(0, 0, 0, 0, 0, 1), fin(1, 0, 0, 0, 0, -1), fin(-1, 0, 0, 0, 0, 0)])
    assert path_weight(pi3) == (0,) * 7
    assert is_dominant(E6, pi3)
    assert all(is_neutral(E6, pi3, i) for i in range(1, 7))
    head = Path([lambda0(E6)])
    assert is_dominant(E6, concat(head, pi3), affine=True)
    assert not is_dominant(E6, pi3, affine=True)
    assert not is_dominant(A1, straight(fin(-1)))


def test_json_round_trip():
    p = Path([(1, F(1, 2), -3), (0, F(-2, 3), 4)])
    data = p.to_json()
    assert data == {"steps": [["1", ["1/2", "-3"]], ["0", ["-2/3", "4"]]]}
    assert Path.from_json(data) == p


def test_repr():
    assert repr(Path([lambda0(A1), fin(-1)])) == "Path([1;0] * (-1))"


@pytest.mark.parametrize("i", [0, 1, 2])
def test_weight_shift_on_affine_path(i):
    p = Path([lambda0(A2), fin(1, 0), fin(0, 1)])
    q = lower_f(A2, p, i)
    if q is not None:
        alpha = affine_simple_root(A2, i)
        assert path_weight(q) == tuple(x - a for x, a in zip(path_weight(p), alpha))
        assert raise_e(A2, q, i) == p
