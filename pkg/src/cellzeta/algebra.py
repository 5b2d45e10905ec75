"""Shuffle algebra on words with distinct letters.

Words are tuples of ints. The letters of a word are distinct; a word with a
repeated letter is zero in the quotient algebra, so shuffles of overlapping
words vanish instead of producing repeats.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Mapping

Word = tuple  # tuple[int, ...]


def _parse_rational(s) -> Fraction | int:
    if isinstance(s, int):
        return s
    q = Fraction(s)
    return q.numerator if q.denominator == 1 else q


def _fmt_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LinComb:
    """Finite formal sum of hashable basis objects with rational coefficients.

    Treated as immutable once built. Coefficients are ints or Fractions;
    zero coefficients are never stored.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | Iterable | None = None):
        t: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                if c:
                    v = t.get(k, 0) + c
                    if v:
                        t[k] = v
                    else:
                        t.pop(k, None)
        self._t = t

    @classmethod
    def _raw(cls, d: dict) -> "LinComb":
        # caller guarantees no zero values
        x = cls.__new__(cls)
        x._t = d
        return x

    @classmethod
    def of(cls, b, coeff=1) -> "LinComb":
        return cls._raw({b: coeff}) if coeff else cls()

    # container protocol
    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def __iter__(self) -> Iterator:
        return iter(sorted(self._t))

    def __contains__(self, b):
        return b in self._t

    def __getitem__(self, b):
        return self._t.get(b, 0)

    def items(self):
        return [(k, self._t[k]) for k in sorted(self._t)]

    def support(self):
        return sorted(self._t)

    def as_dict(self) -> dict:
        return dict(self._t)

    # arithmetic
    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        d = dict(self._t)
        for k, c in other._t.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = v
            else:
                del d[k]
        return LinComb._raw(d)

    def __neg__(self):
        return LinComb._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, LinComb):
            return NotImplemented
        if not c:
            return LinComb()
        return LinComb._raw({k: v * c for k, v in self._t.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def map(self, f: Callable) -> "LinComb":
        """Linear extension of f. f(b) may return a basis object or a LinComb."""
        acc: dict = {}
        for k, c in self._t.items():
            img = f(k)
            if isinstance(img, LinComb):
                for k2, c2 in img._t.items():
                    acc[k2] = acc.get(k2, 0) + c * c2
            elif img is not None:
                acc[img] = acc.get(img, 0) + c
        return LinComb(acc)

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for k, c in self.items():
            parts.append(f"{_fmt_rational(c)}*{k!r}")
        return " + ".join(parts)

    # serialization of LinComb<Word>
    def to_json(self) -> dict:
        return {"terms": [{"coeff": _fmt_rational(c), "word": list(k)} for k, c in self.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "LinComb":
        return cls((tuple(t["word"]), _parse_rational(t["coeff"])) for t in obj["terms"])


def _add(d: dict, k, c):
    v = d.get(k, 0) + c
    if v:
        d[k] = v
    else:
        d.pop(k, None)


# --- shuffles ---------------------------------------------------------------

def shuffle_words(u: Word, v: Word) -> list:
    """All interleavings of u and v (empty list if they share a letter)."""
    if set(u) & set(v):
        return []
    a, b = len(u), len(v)
    if not a:
        return [tuple(v)]
    if not b:
        return [tuple(u)]
    out = []
    n = a + b
    for pos in combinations(range(n), a):
        w = [0] * n
        ps = set(pos)
        i = j = 0
        for p in range(n):
            if p in ps:
                w[p] = u[i]
                i += 1
            else:
                w[p] = v[j]
                j += 1
        out.append(tuple(w))
    return out


def shuffle(u: Word, v: Word) -> LinComb:
    return LinComb._raw({w: 1 for w in shuffle_words(tuple(u), tuple(v))})


def shuffle_lc(x: LinComb, y: LinComb) -> LinComb:
    acc: dict = {}
    for u, a in x.items():
        for v, b in y.items():
            for w in shuffle_words(u, v):
                _add(acc, w, a * b)
    return LinComb._raw(acc)


def shuffle_many(words: Iterable[Word]) -> LinComb:
    acc = LinComb.of(())
    for w in words:
        acc = shuffle_lc(acc, LinComb.of(tuple(w)))
    return acc


def concat(*parts) -> LinComb:
    """Concatenation product of words and/or LinCombs of words."""
    acc = {(): 1}
    for p in parts:
        x = p if isinstance(p, LinComb) else LinComb.of(tuple(p))
        nxt: dict = {}
        for u, a in acc.items():
            for v, b in x.items():
                if set(u) & set(v):
                    continue
                _add(nxt, u + v, a * b)
        acc = nxt
    return LinComb._raw(acc)


# --- Lyndon words and the Radford basis -------------------------------------

def is_lyndon(w: Word) -> bool:
    if not w:
        raise ValueError("Lyndon property undefined for the empty word")
    return w[0] == min(w)


def lyndon_factorization(w: Word) -> tuple:
    """Split a distinct-letter word at its left-to-right minima.

    The factors are Lyndon, and their shuffle has w as lexicographically
    largest term with coefficient 1.
    """
    factors = []
    cur: list = []
    m = None
    for a in w:
        if m is None or a < m:
            if cur:
                factors.append(tuple(cur))
            cur = [a]
            m = a
        else:
            cur.append(a)
    if cur:
        factors.append(tuple(cur))
    return tuple(factors)


def basis_element(factors: Iterable[Word]) -> tuple:
    """Canonical LyndonBasisElement: sorted tuple of Lyndon factors."""
    fs = tuple(sorted(tuple(f) for f in factors))
    for f in fs:
        if not is_lyndon(f):
            raise ValueError(f"{f} is not a Lyndon word")
    return fs


def expand(element: tuple) -> LinComb:
    """Iterated shuffle of the factors of a LyndonBasisElement."""
    return shuffle_many(element)


def expand_lc(x: LinComb) -> LinComb:
    return x.map(expand)


def lyndon_decompose(x: LinComb) -> LinComb:
    """Expansion of x in the Radford basis (Lyndon words and shuffles thereof).

    Triangular rewriting: the lex-largest word w of x is the leading term of
    the shuffle of its Lyndon factorization, so subtract and repeat.
    """
    lengths = {len(w) for w in x.support()}
    if len(lengths) > 1:
        raise ValueError("lyndon_decompose needs a homogeneous input")
    rem = x.as_dict()
    heap = [tuple(-a for a in w) for w in rem]
    heapq.heapify(heap)
    out: dict = {}
    while heap:
        w = tuple(-a for a in heapq.heappop(heap))
        c = rem.pop(w, 0)
        if not c:
            continue
        fs = lyndon_factorization(w)
        _add(out, basis_element(fs), c)
        if len(fs) == 1:
            continue
        for u in shuffle_many(fs).support():
            if u == w:
                continue
            if u not in rem:
                heapq.heappush(heap, tuple(-a for a in u))
            _add(rem, u, -c)
    return LinComb._raw(out)


def radford_basis(letters: Iterable[int]) -> list:
    """All Radford basis elements with exactly the given letters."""
    letters = sorted(letters)
    out = []

    def rec(rest: list, acc: list):
        if not rest:
            out.append(basis_element(acc))
            return
        m, others = rest[0], rest[1:]
        # choose the word led by the smallest remaining letter
        for r in range(len(others) + 1):
            for sub in combinations(others, r):
                left = [a for a in others if a not in sub]
                for perm in permutations(sub):
                    rec(left, acc + [(m,) + perm])

    rec(letters, [])
    return sorted(out)


def lyndon_words(letters: Iterable[int]) -> list:
    letters = sorted(letters)
    if not letters:
        return []
    return [(letters[0],) + p for p in permutations(letters[1:])]


def in_shuffle_ideal(x: LinComb) -> bool:
    """True iff x is a combination of proper shuffles (no single Lyndon factor
    component of full length)."""
    if not x:
        return True
    return all(len(b) > 1 for b in lyndon_decompose(x).support())


# --- the splitting V_S = W_S + I_S ------------------------------------------

def relabel_word(w: Word, mapping: Mapping) -> Word:
    return tuple(mapping[a] for a in w)


def standardize(x: LinComb) -> tuple:
    """Relabel the letters of a homogeneous x to 1..n (order preserving).

    Returns (relabelled, forward map, inverse map)."""
    letters = sorted({a for w in x.support() for a in w})
    fwd = {a: i + 1 for i, a in enumerate(letters)}
    inv = {i + 1: a for i, a in enumerate(letters)}
    return x.map(lambda w: relabel_word(w, fwd)), fwd, inv


def is_1n_word(w: Word, n: int | None = None) -> bool:
    if n is None:
        n = len(w)
    try:
        i = w.index(1)
    except ValueError:
        return False
    return i + 1 < len(w) and w[i + 1] == n


def to_01(x: LinComb, n: int | None = None) -> LinComb:
    """The 1n-word representative of x modulo the shuffle ideal I_S.

    x is a homogeneous combination of words using all letters 1..n. The
    reduction is triangular; see the first two rewriting rules below.
    """
    if not x:
        return LinComb()
    if n is None:
        n = len(x.support()[0])
    for w in x.support():
        if len(w) != n:
            raise ValueError("to_01 needs words of full length n")
    # rule 1: u 1 v == (-1)^|u| 1 (rev(u) sh v)   mod I
    lyn: dict = {}
    for w, c in x.items():
        k = w.index(1)
        if k == 0:
            _add(lyn, w[1:], c)
            continue
        s = c if k % 2 == 0 else -c
        for y in shuffle_words(w[k - 1::-1], w[k + 1:]):
            _add(lyn, y, s)
    # lyn holds y for Lyndon words 1y; bucket by position of n in y
    buckets: dict = {}
    for y, c in lyn.items():
        buckets.setdefault(y.index(n), {})[y] = c
    out: dict = {}
    for j in range(n - 2, -1, -1):
        if j not in buckets:
            continue
        if j == 0:
            for y, c in buckets[j].items():
                _add(out, (1,) + y, c)
            continue
        for y, c in list(buckets[j].items()):
            if not c:
                continue
            p, q = y[:j], y[j + 1:]
            # rule 2: 1 p n q == (-1)^|p| rev(p) 1 n q - sum_{z in p sh nq, z != pnq} 1 z
            _add(out, p[::-1] + (1, n) + q, c if j % 2 == 0 else -c)
            for z in shuffle_words(p, (n,) + q):
                jz = z.index(n)
                if jz == j:
                    continue
                _add(buckets.setdefault(jz, {}), z, -c)
    return LinComb._raw(out)


def split_V(x: LinComb, n: int | None = None) -> tuple:
    """Decompose x = w_part + i_part with w_part in W_S and i_part in I_S."""
    if x and len({len(w) for w in x.support()}) > 1:
        raise ValueError("split_V needs a homogeneous input")
    w_part = to_01(x, n)
    return w_part, x - w_part
