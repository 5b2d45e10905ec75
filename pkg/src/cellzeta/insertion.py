"""Lyndon insertion shuffles and words, and the insertion basis of M0,N.

An insertion element stores its expansion as a LinComb of words together
with the data it was built from: the framing (a convergent Lyndon shuffle,
as a tuple of factor words, or a special convergent word), the vector v
indexed by the letters of the framing, and the pieces inserted at letters
with v > 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence

from .algebra import LinComb, concat, shuffle_lc
from .convergence import (
    enumerate_special_convergent_words,
    is_convergent_word,
    c0,
)


@dataclass(frozen=True)
class InsertionElement:
    kind: str                 # "shuffle" or "word"
    framing: tuple            # tuple of factor words, or (word,) for kind == "word"
    v: tuple                  # v[a-1] for letter a of the framing
    pieces: tuple = ()        # ((letter, index into the smaller L set), ...)
    expansion: LinComb = field(default_factory=LinComb, compare=False, hash=False)

    @property
    def n(self) -> int:
        return sum(self.v)

    @property
    def k(self) -> int:
        return len(self.v)

    def key(self):
        return (-self.k, self.framing, self.v, self.pieces)

    def describe(self) -> str:
        """Human readable form like 1(3 sh 4) sh 2."""
        return _describe(self)

    def provenance(self) -> dict:
        return {
            "kind": self.kind,
            "framing": [list(f) for f in self.framing],
            "v": list(self.v),
            "insertions": [{"letter": a, "index": i} for a, i in self.pieces],
        }


def _describe(el: InsertionElement) -> str:
    offs = _offsets(el.v)
    pieces = dict(el.pieces)

    def letter(a):
        if el.v[a - 1] == 1:
            return str(offs[a] + 1)
        sub = lyndon_insertion_shuffles(el.v[a - 1])[pieces[a]]
        inner = _describe(sub)
        # shift the inner description
        shifted = "".join(str(int(ch) + offs[a]) if ch.isdigit() else ch for ch in inner)
        return "(" + shifted + ")"

    words = ["".join(letter(a) for a in f) for f in el.framing]
    return " sh ".join(words)


def _offsets(v: Sequence[int]) -> dict:
    out = {}
    s = 0
    for i, x in enumerate(v):
        out[i + 1] = s
        s += x
    return out


# --- convergent Lyndon shuffles ---------------------------------------------

@lru_cache(maxsize=None)
def convergent_lyndon_shuffles(k: int) -> tuple:
    """Shuffles of at least two disjoint convergent Lyndon words covering 1..k.

    Each is a sorted tuple of factor words. Singletons are convergent."""
    out = []

    def rec(rest: tuple, acc: list):
        if not rest:
            if len(acc) > 1:
                out.append(tuple(sorted(acc)))
            return
        m, others = rest[0], rest[1:]
        for r in range(len(others) + 1):
            for sub in combinations(others, r):
                left = tuple(a for a in others if a not in sub)
                for perm in permutations(sub):
                    f = (m,) + perm
                    if len(f) > 1 and not is_convergent_word(f):
                        continue
                    rec(left, acc + [f])

    rec(tuple(range(1, k + 1)), [])
    return tuple(sorted(out))


def _v_vectors(k: int, fixed: set, n: int) -> list:
    """v in Z_{>=1}^k with v_a = 1 for a in fixed and sum n, lex order."""
    out = []

    def rec(a, rem, cur):
        if a > k:
            if rem == 0:
                out.append(tuple(cur))
            return
        top = 1 if a in fixed else rem + 1
        for x in range(1, top + 1):
            rec(a + 1, rem - (x - 1), cur + [x])

    rec(1, n - k, [])
    return out


def _piece_choices(v: tuple):
    """All assignments of L-set elements to letters with v > 1."""
    slots = [(a + 1, x) for a, x in enumerate(v) if x > 1]
    combos = [()]
    for a, x in slots:
        m = len(lyndon_insertion_shuffles(x))
        combos = [c + ((a, i),) for c in combos for i in range(m)]
    return combos


def _substitute(v: tuple, pieces: tuple):
    """Map letter a of the framing to a LinComb of words in the new alphabet."""
    offs = _offsets(v)
    pmap = dict(pieces)
    out = {}
    for a in range(1, len(v) + 1):
        if v[a - 1] == 1:
            out[a] = LinComb.of((offs[a] + 1,))
        else:
            sub = lyndon_insertion_shuffles(v[a - 1])[pmap[a]].expansion
            o = offs[a]
            out[a] = sub.map(lambda w, o=o: tuple(x + o for x in w))
    return out


def _insert_word(word: tuple, subs: dict) -> LinComb:
    return concat(*[subs[a] for a in word])


@lru_cache(maxsize=None)
def lyndon_insertion_shuffles(n: int) -> tuple:
    """The set L_{1..n}, deterministically ordered."""
    if n < 2:
        return ()
    out = []
    for k in range(2, n + 1):
        for fr in convergent_lyndon_shuffles(k):
            leftmost = {f[0] for f in fr}
            for v in _v_vectors(k, leftmost, n):
                for pieces in _piece_choices(v):
                    subs = _substitute(v, pieces)
                    exp = LinComb.of(())
                    for f in fr:
                        exp = shuffle_lc(exp, _insert_word(f, subs))
                    out.append(InsertionElement("shuffle", fr, v, pieces, exp))
    out.sort(key=InsertionElement.key)
    return tuple(out)


def insertion_shuffle_count(n: int) -> int:
    """I_n, with the convention I_1 = 1 used by the dimension formula."""
    return 1 if n == 1 else len(lyndon_insertion_shuffles(n))


@lru_cache(maxsize=None)
def lyndon_insertion_words(n: int) -> tuple:
    """The set W_{1..n}: special convergent 1n-words and Lyndon insertion words."""
    out = []
    for k in range(4, n + 1):
        for w in enumerate_special_convergent_words(k):
            for v in _v_vectors(k, {1, k}, n):
                for pieces in _piece_choices(v):
                    exp = _insert_word(w, _substitute(v, pieces))
                    out.append(InsertionElement("word", (w,), v, pieces, exp))
    out.sort(key=InsertionElement.key)
    return tuple(out)


def insertion_basis(N: int) -> tuple:
    """Basis of convergent forms on M0,N: W on N-1 letters (words w -> (w, N))."""
    return lyndon_insertion_words(N - 1)


# --- fixed structures -------------------------------------------------------

@dataclass(frozen=True)
class FixedStructure:
    framing: tuple
    v: tuple

    def v_by_position(self) -> tuple:
        """For a word framing: v read along the positions of the word."""
        if len(self.framing) != 1:
            raise ValueError("positions are only defined for a single word")
        return tuple(self.v[a - 1] for a in self.framing[0])


def _maximal_blocks(factors: Sequence[tuple], n: int, proper: bool) -> list:
    blocks = set()
    for f in factors:
        L = len(f)
        for i in range(L):
            mn = mx = f[i]
            for j in range(i + 1, L):
                mn, mx = min(mn, f[j]), max(mx, f[j])
                ln = j - i + 1
                if mx - mn + 1 == ln and not (proper and ln == n):
                    blocks.add(frozenset(f[i:j + 1]))
    maximal = [b for b in blocks if not any(b < c for c in blocks)]
    return sorted(maximal, key=min)


def fixed_structure(x) -> FixedStructure:
    """Fixed structure of an InsertionElement, or of a raw Lyndon shuffle
    (tuple of factor words) or a single word (tuple of ints)."""
    if isinstance(x, InsertionElement):
        return FixedStructure(x.framing, x.v)
    if x and isinstance(x[0], int):
        factors, is_word = (tuple(x),), True
    else:
        factors, is_word = tuple(tuple(f) for f in x), False
    n = sum(len(f) for f in factors)
    blocks = _maximal_blocks(factors, n, proper=is_word)
    rep = {}
    for b in blocks:
        for a in b:
            rep[a] = min(b)
    # contracted letters: singletons and block minima, renumbered in order
    reps = sorted({rep.get(a, a) for f in factors for a in f})
    newlab = {r: i + 1 for i, r in enumerate(reps)}
    size = {r: 0 for r in reps}
    for f in factors:
        for a in f:
            size[rep.get(a, a)] += 1
    out = []
    for f in factors:
        w = []
        for a in f:
            r = rep.get(a, a)
            if not w or w[-1] != newlab[r]:
                w.append(newlab[r])
        out.append(tuple(w))
    framing = tuple(out) if is_word else tuple(sorted(out))
    v = tuple(size[r] for r in reps)
    return FixedStructure(framing, v)


# --- dimension formula ------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def dimension_formula(N: int) -> int:
    """d_N = sum_r sum_{i_1+..+i_{r-3} = N-3} I_{i_1}..I_{i_{r-3}} c0(r)."""
    total = 0
    for r in range(5, N + 1):
        c = c0(r)
        if not c:
            continue
        for comp in _compositions(N - 3, r - 3):
            p = c
            for i in comp:
                p *= insertion_shuffle_count(i)
            total += p
    return total


def _poly_mul(a: list, b: list, deg: int) -> list:
    out = [0] * (deg + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if i + j > deg:
                break
            out[i + j] += x * y
    return out


def series_dimensions(deg: int) -> list:
    """Coefficients of D(x) = C(I(x)) up to x^deg.

    I(x) = sum_{n>=1} I_n x^n and C(x) = sum_k c0(k+3) x^k, so that the
    coefficient of x^m in D counts basis forms on M0,m+3.
    """
    I = [0] + [insertion_shuffle_count(n) for n in range(1, deg + 1)]
    D = [0] * (deg + 1)
    power = [1] + [0] * deg
    for k in range(1, deg + 1):
        power = _poly_mul(power, I, deg)
        c = c0(k + 3)
        if c:
            D = [d + c * p for d, p in zip(D, power)]
    return D


# --- coordinates in the insertion basis -------------------------------------

class BasisExpander:
    """Coordinates of W_S elements (sums of 1n-words) in the basis W_{1..n}.

    Leading-term elimination: each basis element is reduced against the
    previous ones so that leading (lex-largest) words are distinct; the
    change of basis is tracked so coordinates refer to the original list.
    """

    def __init__(self, elements: Sequence[LinComb]):
        self.size = len(elements)
        self._rows: dict = {}       # lead word -> (dict word->coef, dict idx->coef)
        for i, e in enumerate(elements):
            vec = e.as_dict()
            comb = {i: 1}
            while vec:
                lead = max(vec)
                if lead not in self._rows:
                    break
                c = vec[lead]
                rv, rc = self._rows[lead]
                f = _div(c, rv[lead])
                _axpy(vec, rv, -f)
                _axpy(comb, rc, -f)
            if not vec:
                raise ValueError(f"basis element {i} is dependent on earlier ones")
            self._rows[max(vec)] = (vec, comb)

    def coordinates(self, x: LinComb) -> dict:
        import heapq
        vec = x.as_dict()
        heap = [tuple(-a for a in w) for w in vec]
        heapq.heapify(heap)
        out: dict = {}
        while heap:
            w = tuple(-a for a in heapq.heappop(heap))
            c = vec.get(w, 0)
            if not c:
                continue
            if w not in self._rows:
                raise ValueError(f"not in the span of the insertion basis (word {w})")
            rv, rc = self._rows[w]
            lc = rv[w]
            f = _div(c, lc)
            for u, a in rv.items():
                if u not in vec or not vec[u]:
                    heapq.heappush(heap, tuple(-b for b in u))
                vec[u] = vec.get(u, 0) - f * a
                if not vec[u]:
                    del vec[u]
            _axpy(out, rc, f)
        return out


def _div(a, b):
    q = Fraction(a) / Fraction(b)
    return q.numerator if q.denominator == 1 else q


def _axpy(y: dict, x: dict, a):
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


@lru_cache(maxsize=None)
def basis_expander(N: int) -> BasisExpander:
    return BasisExpander([e.expansion for e in insertion_basis(N)])
