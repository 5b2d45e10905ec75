"""Bad chords, convergence along the standard polygon, convergent words."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .algebra import LinComb, in_shuffle_ideal, standardize
from .polygons import Polygon, SignedPolygon


def _is_interval(s) -> bool:
    return max(s) - min(s) + 1 == len(s)


def _has_block(w: Sequence, lo: int, hi: int) -> bool:
    """Some contiguous subword of w with length in [lo, hi] is an interval."""
    n = len(w)
    for i in range(n):
        mn = mx = w[i]
        for j in range(i + 1, min(n, i + hi)):
            a = w[j]
            if a < mn:
                mn = a
            elif a > mx:
                mx = a
            L = j - i + 1
            if L >= lo and mx - mn + 1 == L:
                return True
    return False


def _standard_arcs(letters) -> set:
    p = Polygon(tuple(letters))
    out = set()
    for a in p.arcs(2, len(letters) - 2):
        out.add(frozenset(a))
    return out


def _arcset(p: Polygon) -> set:
    return {frozenset(a) for a in p.arcs(2, len(p) - 2)}


def is_convergent_polygon(p: Polygon) -> bool:
    std = _standard_arcs(sorted(p.labels))
    return not (_arcset(p) & std)


def is_convergent_word(w: Sequence, cyclic: bool = False) -> bool:
    """No consecutive block appears as a contiguous subword.

    Linear reading (default): no contiguous subword of length >= 2, the
    whole word included, has an interval as letter set. This is the test
    applied to the Lyndon factors of a convergent shuffle.

    Cyclic reading: w is a polygon on its letters, and no arc of size
    2..n-2 is a cyclic interval of 1..n (the convergent polygons).
    """
    w = tuple(w)
    if not cyclic:
        return not _has_block(w, 2, len(w))
    return is_convergent_polygon(Polygon(w))


def is_special_convergent_word(w: Sequence) -> bool:
    """(w, d) shares no chord with the standard polygon (1..n, d)."""
    w = tuple(w)
    return not _has_block(w, 2, len(w) - 1)


@dataclass(frozen=True, order=True)
class BadChord:
    """Consecutive block {lo..hi} of the alphabet 1..n."""

    lo: int
    hi: int

    @property
    def block(self) -> frozenset:
        return frozenset(range(self.lo, self.hi + 1))

    def __repr__(self):
        return "".join(str(i) for i in range(self.lo, self.hi + 1))


def bad_chords(x: LinComb) -> set:
    """Consecutive blocks T (2 <= |T| <= n-1) occurring contiguously in some term.

    x is a LinComb of words on 1..n (polygons (w, d))."""
    out = set()
    for w in x.support():
        n = len(w)
        for i in range(n):
            mn = mx = w[i]
            for j in range(i + 1, min(n, i + n - 1)):
                mn, mx = min(mn, w[j]), max(mx, w[j])
                if mx - mn == j - i:
                    out.add(BadChord(mn, mx))
    return out


def residue_along(x: LinComb, chord: BadChord, e: int | None = None) -> dict:
    """Res_E(x) grouped by right factor.

    Returns {right word (with e substituted): LinComb of left words on T}.
    The right word w' stands for the polygon (w', d).
    """
    T = chord.block
    k = len(T)
    if e is None:
        e = 0  # any label outside 1..n works; 0 sorts first
    groups: dict = {}
    for w, c in x.items():
        for i in range(len(w) - k + 1):
            if w[i] in T and set(w[i:i + k]) == T:
                right = w[:i] + (e,) + w[i + k:]
                groups.setdefault(right, {})
                g = groups[right]
                u = w[i:i + k]
                g[u] = g.get(u, 0) + c
                break
    return {r: LinComb(g) for r, g in groups.items()}


def converges_along(x: LinComb, chord: BadChord) -> bool:
    for left in residue_along(x, chord).values():
        if left and not in_shuffle_ideal(standardize(left)[0]):
            return False
    return True


def is_convergent(x: LinComb) -> bool:
    return all(converges_along(x, c) for c in sorted(bad_chords(x)))


def divergent_chords(x: LinComb) -> list:
    return [c for c in sorted(bad_chords(x)) if not converges_along(x, c)]


# --- enumeration ------------------------------------------------------------

def enumerate_special_convergent_words(n: int, restrict_1n: bool = True) -> list:
    """Special convergent words on 1..n in lexicographic order.

    With restrict_1n (default) only 1n-words are returned: these are the
    convergent 01 cell-forms on M0,n+1.
    """
    out = []
    letters = list(range(1, n + 1))
    w: list = []
    used = [False] * (n + 2)

    def ok_suffix() -> bool:
        # check contiguous subwords ending at the last letter, length 2..n-1
        mn = mx = w[-1]
        L = len(w)
        for j in range(L - 2, -1, -1):
            a = w[j]
            mn, mx = min(mn, a), max(mx, a)
            ln = L - j
            if ln > n - 1:
                break
            if mx - mn + 1 == ln:
                return False
        return True

    def rec():
        if len(w) == n:
            if not restrict_1n or _is_1n(w, n):
                out.append(tuple(w))
            return
        for a in letters:
            if used[a]:
                continue
            if restrict_1n and w:
                # 1 must be followed by n, and n preceded by 1
                if w[-1] == 1 and a != n:
                    continue
                if a == n and w[-1] != 1:
                    continue
            if restrict_1n and not w and a == n:
                continue
            w.append(a)
            used[a] = True
            if ok_suffix():
                rec()
            w.pop()
            used[a] = False

    rec()
    return out


def _is_1n(w, n):
    i = w.index(1)
    return i + 1 < n and w[i + 1] == n


def c0(N: int) -> int:
    """Number of convergent 01 cell-forms on M0,N."""
    if N < 4:
        return 0
    return len(enumerate_special_convergent_words(N - 1))


def enumerate_convergent_polygons(n: int) -> list:
    """Convergent polygons on 1..n up to reversal, as canonical SignedPolygons."""
    out = set()
    for rest in permutations(range(2, n + 1)):
        p = (1,) + rest
        if rest[0] == 2 or rest[-1] == 2 or rest[0] == n or rest[-1] == n:
            continue
        if is_convergent_polygon(Polygon(p)):
            out.add(SignedPolygon.make(p).polygon)
    return [SignedPolygon(q, 1) for q in sorted(out)]


def convergent_polygon_rank(n: int) -> int:
    """Exact dimension of the span of the convergent cell-forms on M0,n.

    Each convergent polygon is projected onto the 1n-words (a basis of the
    top cohomology) and the rank is taken over Q."""
    from .algebra import to_01
    from .reducer import rref

    idx: dict = {}
    rows = []
    for p in enumerate_convergent_polygons(n):
        x = to_01(LinComb.of(p.polygon.word(n)), n - 1)
        rows.append({idx.setdefault(w, len(idx)): c for w, c in x.items()})
    return rref(rows, len(idx)).rank
