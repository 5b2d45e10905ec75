from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

import pytest

from cellzeta.algebra import LinComb
from cellzeta.cellforms import (
    arnold_decompose,
    arnold_forms,
    arnold_value,
    _values,
    build_form,
    composition_eps,
    composition_xy,
    cycle_value,
    dual_composition,
    eval_cell_function,
    eval_form,
    eval_signed,
    format_form,
    mzv_form,
    mzv_integrand,
    mzv_to_shuffle_form,
    multiply_cell_functions,
    parse_form,
    point_label,
    point_name,
    pole_order,
    word_of_cycle,
)
from cellzeta.polygons import Polygon, StablePartition, chords, shuffle1


def rational_point(rng, l):
    """Distinct rationals away from 0 and 1 (generic enough for exact checks)."""
    pts = set()
    while len(pts) < l:
        pts.add(Fraction(rng.randint(-400, 400), rng.randint(1, 97)))
        pts.discard(Fraction(0))
        pts.discard(Fraction(1))
    out = list(pts)
    rng.shuffle(out)
    return out


def test_point_names_round_trip():
    for N in range(5, 9):
        for a in range(1, N + 1):
            assert point_label(point_name(a, N), N) == a


def test_parse_and_format():
    x = parse_form("[0,1,t1,oo,sh(t2,t3)]")
    # infinity is rotated to the end: (t2, t3, 0, 1, t1, oo)
    assert x == LinComb({(3, 4, 1, 5, 2): 1, (4, 3, 1, 5, 2): 1})
    assert format_form(x, 6) == "[0,1,t1,oo,t2,t3] + [0,1,t1,oo,t3,t2]"
    assert parse_form("[0,1,sh(t1,(t2 t3)),oo]", 6) == build_form(6, ["0", "1", ("t1", ("t2", "t3")), "oo"])


def test_cell_function_worked_example(rng):
    # (t1, t3, 0, 1, t2, t4, oo): dt / ((t3-t1)(-t3)(t2-1)(t4-t2))
    N = 7
    cyc = [point_label(a, N) for a in ("t1", "t3", "0", "1", "t2", "t4", "oo")]
    assert word_of_cycle(cyc, N) == (2, 4, 1, 6, 3, 5)
    for _ in range(20):
        t1, t2, t3, t4 = rational_point(rng, 4)
        want = 1 / ((t3 - t1) * (-t3) * (t2 - 1) * (t4 - t2))
        assert eval_cell_function(cyc, [t1, t2, t3, t4], N) == want


@pytest.mark.parametrize("N", [5, 6, 7])
def test_one_element_shuffles_vanish(N, rng):
    """Sum over A sh B of the cell-functions (w, e) is identically zero."""
    labels = list(range(1, N + 1))
    for trial in range(100):
        e = rng.choice(labels)
        rest = [a for a in labels if a != e]
        rng.shuffle(rest)
        k = rng.randint(1, len(rest) - 1)
        x = shuffle1(rest[:k], rest[k:], e)
        assert eval_signed(x, rational_point(rng, N - 3), N) == 0


@pytest.mark.parametrize("N", [5, 6, 7])
def test_product_of_cell_functions_is_shuffle(N, rng):
    """<gA><gB> = <gA|C> * sum of cyclic orders restricting to gA and gB."""
    labels = list(range(1, N + 1))
    checked = 0
    while checked < 100:
        perm = labels[:]
        rng.shuffle(perm)
        big = Polygon(tuple(perm))
        r = rng.randint(2, N - 2)
        C = set(rng.sample(labels, r))
        others = [a for a in labels if a not in C]
        m = rng.randint(0, len(others))
        A = C | set(others[:m])
        B = C | set(others[m:])
        if len(A) < 3 or len(B) < 3:
            continue
        gA, gB = big.restrict(A), big.restrict(B)
        gC = big.restrict(C)
        pt = rational_point(rng, N - 3)
        v = _values(pt, N)
        lhs = cycle_value(gA.labels, v) * cycle_value(gB.labels, v)
        rhs = sum(c * cycle_value(p.labels, v) for p, c in multiply_cell_functions(gA, gB).items())
        rhs *= cycle_value(gC.labels, v)
        assert lhs == rhs, (gA, gB)
        checked += 1


@pytest.mark.parametrize("N", [5, 6, 7])
def test_pole_order_matches_chords(N):
    labels = tuple(range(1, N + 1))
    parts = []
    for r in range(2, N - 1):
        for A in combinations(labels, r):
            if 1 in A:
                parts.append(StablePartition.make(A, set(labels) - set(A)))
    for rest in permutations(labels[1:]):
        g = Polygon((1,) + rest)
        if rest[0] > rest[-1]:
            continue
        ch = chords(g)
        for D in parts:
            o = pole_order(g.labels, D.part1)
            if D in ch:
                assert o == -1
            else:
                assert o >= 0


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_arnold_decomposition_pointwise(l, rng):
    forms = arnold_forms(l)
    assert len(forms) == [2, 6, 24, 120][l - 1]
    for eps in forms[:40]:
        x = arnold_decompose(eps)
        for _ in range(3):
            pt = rational_point(rng, l)
            assert eval_form(x, pt, l + 3) == arnold_value(eps, pt)


def test_composition_words_and_duality():
    assert composition_xy((2, 1)) == "xyy"
    assert composition_eps((2,)) == ("1", "0")
    assert dual_composition((2, 1)) == (3,)
    assert dual_composition((4,)) == (2, 1, 1)
    assert dual_composition((3, 1)) == (3, 1)
    assert dual_composition((2, 2)) == (2, 2)
    with pytest.raises(ValueError):
        composition_xy((1, 2))


@pytest.mark.parametrize("comp,text", [
    ((4,), "[0,1,t1,oo,sh(t2,t3,t4)]"),
    ((3, 1), "[0,1,sh(t1,t2),oo,sh(t3,t4)]"),
    ((2, 2), "[0,1,sh(t1,t3),oo,sh(t2,t4)]"),
    ((2, 1, 1), "[0,1,sh(t1,t2,t3),oo,t4]"),
    ((2,), "[0,1,t1,oo,t2]"),
    ((3,), "[0,1,t1,oo,sh(t2,t3)]"),
    ((2, 1), "[0,1,sh(t1,t2),oo,t3]"),
])
def test_standard_shuffle_forms(comp, text):
    assert mzv_to_shuffle_form(comp) == parse_form(text)


@pytest.mark.parametrize("comp", [(2,), (3,), (2, 1), (4,), (3, 1), (2, 2), (2, 1, 1), (5,), (2, 3)])
def test_mzv_form_is_the_integrand(comp, rng):
    N = sum(comp) + 3
    for _ in range(10):
        pt = rational_point(rng, N - 3)
        assert eval_form(mzv_form(comp), pt, N) == mzv_integrand(comp, pt)
