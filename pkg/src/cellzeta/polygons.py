"""Polygons (cyclic orders on label sets), chords, residues and shuffles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .algebra import LinComb, shuffle_words


def _rotate_min(labels: Sequence) -> tuple:
    labels = tuple(labels)
    if not labels:
        return labels
    i = labels.index(min(labels))
    return labels[i:] + labels[:i]


@dataclass(frozen=True, order=True)
class Polygon:
    """Cyclic order on a finite set of int labels, stored with the minimum first."""

    labels: tuple

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"repeated label in {self.labels}")
        object.__setattr__(self, "labels", _rotate_min(self.labels))

    def __len__(self):
        return len(self.labels)

    @property
    def label_set(self) -> frozenset:
        return frozenset(self.labels)

    def reversed(self) -> "Polygon":
        return Polygon(self.labels[::-1])

    def starting_at(self, a) -> tuple:
        i = self.labels.index(a)
        return self.labels[i:] + self.labels[:i]

    def word(self, last) -> tuple:
        """The word read along the polygon ending just before `last`."""
        return self.starting_at(last)[1:]

    def restrict(self, subset: Iterable) -> "Polygon":
        s = set(subset)
        return Polygon(tuple(a for a in self.labels if a in s))

    def relabel(self, mapping: Mapping) -> "Polygon":
        return Polygon(tuple(mapping[a] for a in self.labels))

    def arcs(self, min_len=1, max_len=None):
        """Contiguous arcs as tuples (in cyclic order)."""
        n = len(self.labels)
        max_len = n - 1 if max_len is None else max_len
        L = self.labels + self.labels
        for k in range(min_len, max_len + 1):
            for i in range(n):
                yield L[i:i + k]

    def to_json(self):
        return {"labels": list(self.labels)}


def polygon_from_word(w: Sequence, d) -> Polygon:
    """The polygon (w, d)."""
    return Polygon(tuple(w) + (d,))


@dataclass(frozen=True, order=True)
class SignedPolygon:
    """Class in the space where a polygon equals (-1)^n times its reversal."""

    polygon: Polygon
    sign: int = 1

    @staticmethod
    def make(labels: Sequence | Polygon, sign: int = 1) -> "SignedPolygon":
        p = labels if isinstance(labels, Polygon) else Polygon(tuple(labels))
        r = p.reversed()
        if r.labels < p.labels:
            n = len(p)
            return SignedPolygon(r, sign * (-1) ** n)
        return SignedPolygon(p, sign)

    def __len__(self):
        return len(self.polygon)

    def to_json(self):
        return {"labels": list(self.polygon.labels), "sign": self.sign}


def signed_lc(x: LinComb) -> LinComb:
    """Push a LinComb of Polygons into the sign quotient: returns LinComb of
    canonical Polygons (the representatives) with signs absorbed."""
    acc: dict = {}
    for p, c in x.items():
        sp = SignedPolygon.make(p)
        acc[sp.polygon] = acc.get(sp.polygon, 0) + sp.sign * c
    return LinComb(acc)


@dataclass(frozen=True)
class StablePartition:
    part1: frozenset
    part2: frozenset

    @staticmethod
    def make(a: Iterable, b: Iterable) -> "StablePartition":
        a, b = frozenset(a), frozenset(b)
        if a & b:
            raise ValueError("parts must be disjoint")
        if len(a) < 2 or len(b) < 2:
            raise ValueError("each part needs at least two labels")
        if min(b) < min(a):
            a, b = b, a
        return StablePartition(a, b)

    @property
    def labels(self) -> frozenset:
        return self.part1 | self.part2

    def other(self, part) -> frozenset:
        part = frozenset(part)
        if part == self.part1:
            return self.part2
        if part == self.part2:
            return self.part1
        raise ValueError("not a part of this partition")

    def key(self):
        return (tuple(sorted(self.part1)), tuple(sorted(self.part2)))

    def __lt__(self, other):
        return self.key() < other.key()

    def to_json(self):
        return [sorted(self.part1), sorted(self.part2)]

    def __repr__(self):
        a, b = self.key()
        return "{" + "".join(map(str, a)) + "|" + "".join(map(str, b)) + "}"


def chords(g: Polygon) -> set:
    n = len(g)
    if n < 4:
        return set()
    out = set()
    full = g.label_set
    for arc in g.arcs(2, n - 2):
        out.add(StablePartition.make(arc, full - set(arc)))
    return out


def _arc_of(g: Polygon, block: frozenset):
    """The block as a contiguous arc of g, or None."""
    n = len(g)
    k = len(block)
    L = g.labels + g.labels
    for i in range(n):
        if L[i] in block and L[i - 1 if i else n - 1] not in block:
            arc = L[i:i + k]
            return arc if set(arc) == block else None
    return None


def cut(g: Polygon, block: Iterable, d) -> tuple | None:
    """Cut g along the chord separating `block` from the rest.

    Returns (inner, outer): inner is the arc of block closed by d, outer is
    the complementary arc closed by d. None if block is not an arc of g.
    """
    block = frozenset(block)
    if d in g.label_set:
        raise ValueError("fresh label already used")
    arc = _arc_of(g, block)
    if arc is None:
        return None
    start = g.labels.index(arc[-1])
    rest = g.labels[start + 1:] + g.labels[:start + 1]
    rest = tuple(a for a in rest if a not in block)
    return Polygon(arc + (d,)), Polygon(rest + (d,))


def residue(g: Polygon, D: StablePartition, d=None):
    """Residue of a polygon along a stable partition; None for zero."""
    if D.labels != g.label_set:
        raise ValueError("D is not a partition of the label set")
    if d is None:
        d = max(g.labels) + 1
    if D not in chords(g):
        return None
    return cut(g, D.part1, d)


def composed_residue(g: Polygon, parts: Sequence[Iterable], fresh: Sequence | None = None):
    """Cut g along D_i = (S_1 u ... u S_i | rest) for a sequence of parts.

    Returns a tuple of r+1 polygons on S_1+d_1, S_2+d_1+d_2, ..., S_{r+1}+d_r
    or None when some D_i is not a chord of g.
    """
    parts = [frozenset(p) for p in parts]
    allp = frozenset().union(*parts)
    if allp != g.label_set or sum(len(p) for p in parts) != len(allp):
        raise ValueError("parts must partition the label set")
    r = len(parts) - 1
    if fresh is None:
        m = max(g.labels)
        fresh = [m + i + 1 for i in range(r)]
    acc = frozenset()
    for i in range(r):
        acc |= parts[i]
        StablePartition.make(acc, allp - acc)  # validates sizes
    out = []
    cur = g
    prev = None
    for i in range(r):
        block = parts[i] | ({prev} if prev is not None else set())
        res = cut(cur, block, fresh[i])
        if res is None:
            return None
        inner, cur = res
        out.append(inner)
        prev = fresh[i]
    out.append(cur)
    return tuple(out)


def shuffle1(A: Sequence, B: Sequence, e) -> LinComb:
    if e in A or e in B:
        raise ValueError("e must not occur in A or B")
    return LinComb((polygon_from_word(w, e), 1) for w in shuffle_words(tuple(A), tuple(B)))


def _gaps(g: Polygon, C: Sequence) -> list:
    """Words between consecutive elements of C (in the order C) along g."""
    seq = g.starting_at(C[0])
    cs = set(C)
    gaps = []
    cur: list = []
    for a in seq[1:]:
        if a in cs:
            gaps.append(tuple(cur))
            cur = []
        else:
            cur.append(a)
    gaps.append(tuple(cur))
    return gaps


def common_order(g: Polygon, C: Iterable) -> tuple:
    return g.restrict(C).labels


def shuffle_relative(gA: Polygon, gB: Polygon) -> LinComb:
    """Sum of cyclic orders on the union restricting to gA and gB.

    The induced cyclic orders on the intersection must agree.
    """
    C = gA.label_set & gB.label_set
    if not C:
        raise ValueError("polygons share no labels")
    cA = common_order(gA, C)
    if cA != common_order(gB, C):
        raise ValueError("incompatible induced cyclic orders")
    ga, gb = _gaps(gA, cA), _gaps(gB, cA)
    terms = [()]
    for c, a, b in zip(cA, ga, gb):
        sh = shuffle_words(a, b)
        terms = [t + (c,) + s for t in terms for s in sh]
    return LinComb((Polygon(t), 1) for t in terms)


def lift(g: SignedPolygon | Polygon, order: Sequence) -> tuple:
    """Orientation of g whose restriction to `order`'s labels is `order`.

    Returns (Polygon, sign). Only a reversal can be needed, so `order` must
    be one of the two orientations induced by g.
    """
    if isinstance(g, SignedPolygon):
        p, s = g.polygon, g.sign
    else:
        p, s = g, 1
    want = _rotate_min(order)
    if common_order(p, order) == want:
        return p, s
    r = p.reversed()
    if common_order(r, order) == want:
        return r, s * (-1) ** len(p)
    raise ValueError("order is not induced by the polygon")


def shuffle3(g1, g2, E: Iterable | None = None) -> LinComb:
    """Shuffle of two signed polygons relative to their three common labels.

    Both are lifted so that they induce the increasing cyclic order on E.
    Returns LinComb of SignedPolygon (coefficient carries the sign).
    """
    p1 = g1.polygon if isinstance(g1, SignedPolygon) else g1
    p2 = g2.polygon if isinstance(g2, SignedPolygon) else g2
    common = p1.label_set & p2.label_set
    if E is None:
        E = common
    E = tuple(sorted(E))
    if len(E) != 3 or set(E) != common:
        raise ValueError("the polygons must meet in exactly three labels")
    a, sa = lift(g1, E)
    b, sb = lift(g2, E)
    acc: dict = {}
    for p, c in shuffle_relative(a, b).items():
        sp = SignedPolygon.make(p)
        k = SignedPolygon(sp.polygon, 1)
        acc[k] = acc.get(k, 0) + c * sa * sb * sp.sign
    return LinComb(acc)


# --- permutations -----------------------------------------------------------

def act(sigma: Mapping, g):
    """Relabel a (signed) polygon and re-canonicalize."""
    if isinstance(g, SignedPolygon):
        return SignedPolygon.make(g.polygon.relabel(sigma), g.sign)
    return SignedPolygon.make(g.relabel(sigma))


def compose(s: Mapping, t: Mapping) -> dict:
    """s after t."""
    return {a: s[t[a]] for a in t}


def invert(s: Mapping) -> dict:
    return {v: k for k, v in s.items()}


@dataclass(frozen=True)
class DihedralElement:
    perm: tuple  # perm[i-1] = image of label i
    eps: int

    def as_map(self) -> dict:
        return {i + 1: a for i, a in enumerate(self.perm)}

    def __repr__(self):
        kind = "rot" if self.eps == 1 else "ref"
        return f"{kind}{self.perm}"


def dihedral_group(n: int) -> list:
    out = []
    for k in range(n):
        out.append(DihedralElement(tuple((i - 1 + k) % n + 1 for i in range(1, n + 1)), 1))
    for k in range(n):
        out.append(DihedralElement(tuple((k - i) % n + 1 for i in range(1, n + 1)), -1))
    return out


def standard_polygon(n: int) -> Polygon:
    return Polygon(tuple(range(1, n + 1)))
