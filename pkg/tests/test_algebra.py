from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

import pytest

from cellzeta.algebra import (
    LinComb,
    basis_element,
    concat,
    expand,
    expand_lc,
    in_shuffle_ideal,
    is_1n_word,
    is_lyndon,
    lyndon_decompose,
    lyndon_factorization,
    lyndon_words,
    radford_basis,
    shuffle,
    shuffle_lc,
    shuffle_many,
    shuffle_words,
    split_V,
    standardize,
    to_01,
)
from cellzeta.reducer import rref


def random_lc(rng, letters, terms=4):
    letters = list(letters)
    d = {}
    for _ in range(terms):
        w = letters[:]
        rng.shuffle(w)
        d[tuple(w)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return LinComb(d)


# --- LinComb ---------------------------------------------------------------

def test_lincomb_drops_zeros_and_compares():
    x = LinComb({(1, 2): 1, (2, 1): 0})
    assert x.support() == [(1, 2)]
    assert x - x == LinComb()
    assert (x * 3)[(1, 2)] == 3


def test_lincomb_json_round_trip(rng):
    x = random_lc(rng, range(1, 5))
    assert LinComb.from_json(x.to_json()) == x


# --- shuffle laws ----------------------------------------------------------

@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (2, 3), (3, 3), (4, 2)])
def test_shuffle_word_count_is_binomial(a, b):
    u = tuple(range(1, a + 1))
    v = tuple(range(a + 1, a + b + 1))
    ws = shuffle_words(u, v)
    assert len(ws) == math.comb(a + b, a)
    assert len(set(ws)) == len(ws)


def test_shuffle_commutative_and_associative(rng):
    for _ in range(20):
        letters = list(range(1, 8))
        rng.shuffle(letters)
        u, v, w = tuple(letters[:2]), tuple(letters[2:5]), tuple(letters[5:])
        assert shuffle(u, v) == shuffle(v, u)
        assert shuffle_lc(shuffle(u, v), LinComb.of(w)) == shuffle_lc(LinComb.of(u), shuffle(v, w))


def test_shuffle_unit_and_bilinearity(rng):
    x = random_lc(rng, (1, 2), 2)
    y = random_lc(rng, (3, 4), 2)
    z = random_lc(rng, (3, 4), 2)
    assert shuffle_lc(LinComb.of(()), x) == x
    assert shuffle_lc(x, y + z) == shuffle_lc(x, y) + shuffle_lc(x, z)


def test_concat_skips_overlapping_letters():
    assert concat((1,), shuffle((2,), (3,))) == LinComb({(1, 2, 3): 1, (1, 3, 2): 1})
    assert concat((1,), (1,)) == LinComb()


# --- Lyndon words and the Radford basis ------------------------------------

def test_lyndon_property():
    assert is_lyndon((1, 3, 2))
    assert not is_lyndon((2, 1))
    with pytest.raises(ValueError):
        is_lyndon(())


def test_lyndon_factorization_splits_at_minima():
    assert lyndon_factorization((4, 2, 5, 1, 3)) == ((4,), (2, 5), (1, 3))
    for w in permutations(range(1, 6)):
        fs = lyndon_factorization(w)
        assert sum(fs, ()) == w
        assert all(is_lyndon(f) for f in fs)
        assert [f[0] for f in fs] == sorted((f[0] for f in fs), reverse=True)


@pytest.mark.parametrize("n", range(1, 7))
def test_radford_and_lyndon_counts(n):
    letters = range(1, n + 1)
    assert len(radford_basis(letters)) == math.factorial(n)
    assert len(lyndon_words(letters)) == math.factorial(n - 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_radford_basis_is_a_basis(n):
    """The expansions of the Radford basis span V_S (full rank n!)."""
    words = list(permutations(range(1, n + 1)))
    idx = {w: i for i, w in enumerate(words)}
    rows = [{idx[w]: c for w, c in expand(b).items()} for b in radford_basis(range(1, n + 1))]
    assert rref(rows, len(words)).rank == len(words)


def test_lyndon_decompose_round_trip(rng):
    for n in range(2, 7):
        for _ in range(5):
            x = random_lc(rng, range(1, n + 1), 3)
            assert expand_lc(lyndon_decompose(x)) == x


def test_lyndon_decompose_of_shuffle_is_one_element():
    x = shuffle((1, 3), (2, 4))
    assert lyndon_decompose(x) == LinComb.of(basis_element([(1, 3), (2, 4)]))


def test_shuffle_ideal_membership():
    assert in_shuffle_ideal(shuffle((2,), (1, 3)))
    assert in_shuffle_ideal(shuffle_many([(1,), (2,), (3,)]))
    assert not in_shuffle_ideal(LinComb.of((1, 3, 2)))
    assert in_shuffle_ideal(LinComb())


# --- the splitting --------------------------------------------------------

def test_standardize_preserves_order():
    x = LinComb({(7, 3, 5): 2})
    y, fwd, inv = standardize(x)
    assert y == LinComb({(3, 1, 2): 2})
    assert inv[3] == 7 and fwd[3] == 1


def _brute_split(x: LinComb, n: int):
    """Change of basis: 1n-words plus proper Radford shuffles span V_S.

    Solve x = sum a_w w + sum b_s s exactly; return the 1n part."""
    words = list(permutations(range(1, n + 1)))
    gens = [LinComb.of(w) for w in words if is_1n_word(w, n)]
    gens += [expand(b) for b in radford_basis(range(1, n + 1)) if len(b) > 1]
    m = len(gens)
    assert m == len(words)
    # augmented columns: one per generator, last column is x
    rows = []
    for w in words:
        r = {j: g[w] for j, g in enumerate(gens) if w in g}
        if x[w]:
            r[m] = -x[w]
        if r:
            rows.append(r)
    ech = rref(rows, m + 1)
    n1 = sum(1 for w in words if is_1n_word(w, n))
    out = {}
    one_n = [w for w in words if is_1n_word(w, n)]
    for c, row in ech.pivots.items():
        coef = Fraction(-row.get(m, 0), row[c])
        if c < n1 and coef:
            out[one_n[c]] = coef
    return LinComb(out)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_split_matches_brute_force_change_of_basis(n, rng):
    for _ in range(3):
        x = random_lc(rng, range(1, n + 1), 5)
        w_part, i_part = split_V(x, n)
        assert all(is_1n_word(w, n) for w in w_part.support())
        assert in_shuffle_ideal(i_part)
        assert w_part == _brute_split(x, n)


def test_to_01_kills_shuffles_and_fixes_1n_words():
    assert to_01(shuffle((2,), (1, 4, 3)), 4) == LinComb()
    x = LinComb({(1, 4, 2, 3): 3, (3, 1, 4, 2): -1})
    assert to_01(x, 4) == x


def test_to_01_small_case():
    # 2 sh 13 = 213 + 123 + 132 lies in I, so 123 == -213 - 132
    assert to_01(LinComb.of((1, 2, 3)), 3) == LinComb({(2, 1, 3): -1, (1, 3, 2): -1})
    # 1 is followed by 4, so 2143 is a 1n-word and stays
    assert to_01(LinComb.of((2, 1, 4, 3)), 4) == LinComb.of((2, 1, 4, 3))
