from __future__ import annotations


import pytest

from cellzeta.algebra import LinComb
from cellzeta.polygons import (
    Polygon,
    SignedPolygon,
    StablePartition,
    act,
    chords,
    compose,
    composed_residue,
    cut,
    dihedral_group,
    invert,
    lift,
    residue,
    shuffle3,
    shuffle_relative,
    signed_lc,
    standard_polygon,
)


def canon(x: LinComb) -> dict:
    """Fold orientation signs into coefficients: {Polygon: coef}."""
    out: dict = {}
    for p, c in x.items():
        sp = p if isinstance(p, SignedPolygon) else SignedPolygon.make(p)
        sp = SignedPolygon.make(sp.polygon, sp.sign)
        out[sp.polygon] = out.get(sp.polygon, 0) + c * sp.sign
    return {k: v for k, v in out.items() if v}


def test_polygon_canonical_rotation():
    p = Polygon((3, 1, 2))
    assert p.labels == (1, 2, 3)
    assert p.starting_at(2) == (2, 3, 1)
    assert p.word(3) == (1, 2)
    assert p.reversed().labels == (1, 3, 2)


def test_signed_polygon_reversal_sign():
    for n in range(3, 8):
        labels = tuple(range(1, n + 1))
        a = SignedPolygon.make(labels)
        b = SignedPolygon.make(labels[::-1])
        assert a.polygon == b.polygon
        assert b.sign == (-1) ** n * a.sign


def test_chords_of_pentagon():
    cs = chords(standard_polygon(5))
    assert len(cs) == 5
    assert StablePartition.make({1, 2}, {3, 4, 5}) in cs
    assert StablePartition.make({1, 3}, {2, 4, 5}) not in cs


@pytest.mark.parametrize("n", range(4, 9))
def test_chord_count_is_associahedron_facets(n):
    # number of diagonals of an n-gon
    assert len(chords(standard_polygon(n))) == n * (n - 3) // 2


def test_residue_cut_label_sets():
    g = Polygon((1, 3, 2, 4, 5, 6))
    D = StablePartition.make({3, 2}, {1, 4, 5, 6})
    # the first factor lives on the part holding the smallest label
    first, second = residue(g, D, 0)
    assert first == Polygon((4, 5, 6, 1, 0))
    assert second == Polygon((3, 2, 0))
    assert cut(g, {2, 3}, 0) == (Polygon((3, 2, 0)), Polygon((4, 5, 6, 1, 0)))
    assert residue(g, StablePartition.make({1, 2}, {3, 4, 5, 6})) is None


def test_composed_residue_with_one_cut_is_residue(rng):
    for _ in range(30):
        labels = list(range(1, 8))
        rng.shuffle(labels)
        g = Polygon(tuple(labels))
        for arc in g.arcs(2, 5):
            A = set(arc)
            B = set(range(1, 8)) - A
            one = composed_residue(g, [A, B], fresh=[9])
            assert one == residue(g, StablePartition.make(A, B), 9) or (
                one is not None and one == cut(g, A, 9))


def test_composed_residue_is_iterated_cut(rng):
    for _ in range(30):
        labels = list(range(1, 10))
        rng.shuffle(labels)
        g = Polygon(tuple(labels))
        seq = g.starting_at(labels[0])
        S1, S2, S3 = set(seq[:2]), set(seq[2:5]), set(seq[5:])
        res = composed_residue(g, [S1, S2, S3], fresh=[20, 21])
        inner, rest = cut(g, S1, 20)
        inner2, rest2 = cut(rest, S2 | {20}, 21)
        assert res == (inner, inner2, rest2)


def test_composed_residue_twelve_gon():
    d = standard_polygon(12)
    parts = [{1, 2, 3}, {4, 10, 11, 12}, {5, 9}, {6}, {7, 8}]
    res = composed_residue(d, parts, fresh=[101, 102, 103, 104])
    assert res is not None
    sets = [p.label_set for p in res]
    assert sets == [
        {1, 2, 3, 101}, {4, 10, 11, 12, 101, 102}, {5, 9, 102, 103},
        {6, 103, 104}, {7, 8, 104},
    ]
    # the first piece inherits the order of the 12-gon
    assert res[0] == Polygon((1, 2, 3, 101))


def test_composed_residue_not_a_chord_gives_none():
    assert composed_residue(standard_polygon(6), [{1, 3}, {2, 4, 5, 6}]) is None


def test_shuffle_relative_one_common_label_count():
    # gA on {0,a,b} and gB on {0,c}: shuffles of the gaps
    res = shuffle_relative(Polygon((0, 1, 2)), Polygon((0, 3)))
    assert len(res) == 3


def test_shuffle_with_respect_to_three_points_worked_example():
    # labels: 0=1 t1=2 t2=3 t3=4 1=5 oo=6
    g1 = SignedPolygon.make((1, 2, 5, 4, 6))       # (0, t1, 1, t3, oo)
    g2 = SignedPolygon.make((1, 6, 3, 5))          # (0, oo, t2, 1)
    lifted, sign = lift(g2, (1, 5, 6))
    assert lifted == Polygon((1, 5, 3, 6)) and sign == 1      # (-1)^4 (0, 1, t2, oo)
    got = canon(shuffle3(g1, g2))
    want = canon(LinComb({SignedPolygon.make((1, 2, 5, 3, 4, 6)): 1,
                          SignedPolygon.make((1, 2, 5, 4, 3, 6)): 1}))
    assert got == want


def test_pair_of_polygons_product_worked_example():
    # labels 0=1 t1=2 t2=3 t3=4 t4=5 1=6 oo=7; T1={0,1,oo,t1,t4}, T2={0,1,oo,t2,t3}
    cell = shuffle3(SignedPolygon.make((1, 2, 6, 7, 5)), SignedPolygon.make((1, 3, 6, 4, 7)))
    form = shuffle3(SignedPolygon.make((1, 7, 2, 5, 6)), SignedPolygon.make((1, 4, 3, 7, 6)))
    pair = {}
    for c, a in canon(cell).items():
        for f, b in canon(form).items():
            pair[c, f] = a * b
    f0 = Polygon((1, 4, 3, 7, 2, 5, 6))            # [0, t3, t2, oo, t1, t4, 1]
    sf = SignedPolygon.make(f0.labels)
    want = {}
    for cl in [(1, 2, 3, 6, 4, 7, 5), (1, 3, 2, 6, 4, 7, 5)]:   # (0, t1 sh t2, 1, t3, oo, t4)
        sc = SignedPolygon.make(cl)
        want[sc.polygon, sf.polygon] = -1 * sc.sign * sf.sign
    assert pair == want


def test_shuffle3_rejects_wrong_intersections():
    with pytest.raises(ValueError):
        shuffle3(Polygon((1, 2, 3, 4)), Polygon((1, 2, 5, 6)))


# --- group actions ---------------------------------------------------------

@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_dihedral_group_composition_with_signs(n):
    G = dihedral_group(n)
    assert len(G) == 2 * n
    elems = {g.perm: g.eps for g in G}
    d = SignedPolygon(standard_polygon(n), 1)
    for g in G:
        img = act(g.as_map(), d)
        assert img.polygon == d.polygon
        assert img.sign == (1 if g.eps == 1 else (-1) ** n)
    for g in G:
        for h in G:
            gh = compose(g.as_map(), h.as_map())
            perm = tuple(gh[i] for i in range(1, n + 1))
            assert elems[perm] == g.eps * h.eps
            p = SignedPolygon.make((1, 3, 2) + tuple(range(4, n + 1)))
            assert act(g.as_map(), act(h.as_map(), p)) == act(gh, p)


def test_act_inverse_round_trip(rng):
    for _ in range(20):
        labels = list(range(1, 8))
        rng.shuffle(labels)
        sigma = dict(zip(range(1, 8), labels))
        p = SignedPolygon.make(tuple(rng.sample(range(1, 8), 7)))
        assert act(invert(sigma), act(sigma, p)) == p


def test_signed_lc_folds_orientations():
    x = LinComb({Polygon((1, 2, 3, 4)): 1, Polygon((1, 4, 3, 2)): 1})
    assert signed_lc(x) == LinComb({Polygon((1, 2, 3, 4)): 2})
