"""Dihedral and product-map relations between cell-zeta values.

Forms on M0,N are LinCombs of words w on 1..N-1 standing for the cyclic
orders (w, N). Period symbols are strings: "B{N}.{k}" is the integral of
the k-th insertion basis form on M0,N over the standard cell, and a
product of generators is written with "*" between sorted factors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import LinComb, to_01
from .cellforms import dual_composition, mzv_form
from .convergence import is_convergent
from .insertion import basis_expander, insertion_basis
from .polygons import (
    Polygon,
    SignedPolygon,
    act,
    dihedral_group,
    invert,
    shuffle3,
    shuffle_relative,
    standard_polygon,
)


def basis_symbol(N: int, k: int) -> str:
    return f"B{N}.{k}"


def parse_symbol(s: str) -> tuple:
    N, k = s[1:].split(".")
    return int(N), int(k)


def symbol_weight(s: str) -> int:
    return sum(parse_symbol(f)[0] - 3 for f in s.split("*"))


def product_symbol(factors: Iterable[str]) -> str:
    fs = []
    for f in factors:
        fs.extend(f.split("*"))
    return "*".join(sorted(fs, key=lambda s: (parse_symbol(s), s)))


# --- forms and relabelling --------------------------------------------------

def relabel_form(x: LinComb, sigma: dict, N: int) -> LinComb:
    """Push a form forward by a relabelling of the marked points."""
    return x.map(lambda w: Polygon(tuple(w) + (N,)).relabel(sigma).word(N))


def form_to_signed(x: LinComb, N: int) -> LinComb:
    return LinComb((SignedPolygon.make(tuple(w) + (N,)), c) for w, c in x.items())


def signed_to_form(x: LinComb, N: int) -> LinComb:
    acc: dict = {}
    for sp, c in x.items():
        w = sp.polygon.word(N)
        acc[w] = acc.get(w, 0) + c * sp.sign
    return LinComb(acc)


def expand_in_basis(x: LinComb, N: int, check_convergent: bool = False) -> dict:
    """Coordinates of a convergent form in the insertion basis of M0,N."""
    if check_convergent and not is_convergent(x):
        raise ValueError("form is not convergent on the standard cell")
    return basis_expander(N).coordinates(to_01(x, N - 1))


def basis_form(N: int, k: int) -> LinComb:
    return insertion_basis(N)[k].expansion


def combination_form(coords: dict, N: int) -> LinComb:
    acc = LinComb()
    for k, c in coords.items():
        acc = acc + c * basis_form(N, k)
    return acc


# --- relations --------------------------------------------------------------

@dataclass
class Relation:
    row: dict          # symbol -> Rational
    tag: str

    def normalized(self) -> "Relation":
        if not self.row:
            return self
        lead = min(self.row, key=_col_key)
        c = Fraction(self.row[lead])
        return Relation({k: _norm(Fraction(v) / c) for k, v in self.row.items()}, self.tag)


def _norm(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def _col_key(s: str):
    fs = s.split("*")
    return (len(fs) > 1, [parse_symbol(f) for f in fs])


def dihedral_image(N: int, k: int, g) -> dict:
    x = relabel_form(basis_form(N, k), g.as_map(), N)
    return expand_in_basis(x, N)


def dihedral_relations(N: int, generators_only: bool = False) -> list:
    """int w_k - eps(g) * int g(w_k) = 0 for all group elements g.

    The sign is +1 for rotations and (-1)^N for reflections. With
    generators_only the rotation by one step and one reflection are used;
    they generate the group, so the span is the same.
    """
    group = dihedral_group(N)
    if generators_only:
        group = [group[1], group[N]]
    out = []
    B = insertion_basis(N)
    for g in group:
        if g.perm == tuple(range(1, N + 1)):
            continue
        eps = 1 if g.eps == 1 else (-1) ** N
        for k in range(len(B)):
            img = dihedral_image(N, k, g)
            row: dict = {basis_symbol(N, k): 1}
            for j, c in img.items():
                s = basis_symbol(N, j)
                row[s] = row.get(s, 0) - eps * c
            row = {s: c for s, c in row.items() if c}
            if row:
                out.append(Relation(row, f"dihedral {g!r} on {basis_symbol(N, k)}"))
    return out


def duality_relation(comp: Sequence[int]) -> tuple:
    """The reflection fixing the edge (1, oo): zeta(comp) = zeta(dual).

    Returns (dual composition, Relation over insertion symbols). The
    relation states int mzv_form(comp) - int mzv_form(dual) = 0.
    """
    comp = tuple(comp)
    dual = dual_composition(comp)
    N = sum(comp) + 3
    # reflection swapping 0 <-> 1 and t_i <-> t_{l+1-i}, fixing oo
    sigma = {i: N - i for i in range(1, N)}
    sigma[N] = N
    x = mzv_form(comp)
    y = mzv_form(dual)
    eps = (-1) ** N
    img = relabel_form(x, sigma, N)
    lhs = expand_in_basis(x, N)
    rhs = expand_in_basis(img, N)
    target = expand_in_basis(y, N)
    if {k: eps * c for k, c in rhs.items()} != target:
        raise AssertionError("reflected form is not the dual MZV form")
    row: dict = {}
    for k, c in lhs.items():
        row[basis_symbol(N, k)] = row.get(basis_symbol(N, k), 0) + c
    for k, c in target.items():
        row[basis_symbol(N, k)] = row.get(basis_symbol(N, k), 0) - c
    row = {s: c for s, c in row.items() if c}
    return dual, Relation(row, f"duality {comp} <-> {dual}")


# --- product maps -----------------------------------------------------------

@dataclass(frozen=True)
class ProductMap:
    """Two subsets T1, T2 of the marked points meeting in three labels."""

    T1: tuple
    T2: tuple

    @property
    def E(self) -> tuple:
        return tuple(sorted(set(self.T1) & set(self.T2)))

    def to_json(self):
        return {"T1": list(self.T1), "T2": list(self.T2)}


def _config(T1, T2) -> tuple:
    a, b = tuple(sorted(T1)), tuple(sorted(T2))
    return (a, b) if a < b else (b, a)


def preimage_cells(N: int, T1: Sequence, T2: Sequence) -> list:
    """Cyclic orders on 1..N restricting to the standard order on T1 and T2."""
    d = standard_polygon(N)
    return shuffle_relative(d.restrict(T1), d.restrict(T2)).support()


def cell_relabelling(g: Polygon) -> dict:
    """tau with tau(delta) = g and tau(1) = 1: label i goes to the i-th vertex."""
    seq = g.starting_at(1)
    return {i + 1: a for i, a in enumerate(seq)}


@lru_cache(maxsize=None)
def product_map_classes(N: int) -> tuple:
    """Representatives of product maps on M0,N up to equivalence.

    Equivalence is generated by the dihedral symmetries of the standard cell,
    swapping T1 and T2, and moving a configuration to the standard cell
    through any of its preimage cells (the data are then identical).
    """
    labels = range(1, N + 1)
    configs = []
    for E in combinations(labels, 3):
        rest = [a for a in labels if a not in E]
        m = len(rest)
        for r in range(2, m - 1):
            for S1 in combinations(rest, r):
                S2 = tuple(a for a in rest if a not in S1)
                c = _config(E + S1, E + S2)
                configs.append(c)
    configs = sorted(set(configs))
    parent = {c: c for c in configs}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    group = dihedral_group(N)
    for c in configs:
        T1, T2 = c
        for g in group:
            m = g.as_map()
            union(c, _config([m[a] for a in T1], [m[a] for a in T2]))
        for cell in preimage_cells(N, T1, T2):
            inv = invert(cell_relabelling(cell))
            union(c, _config([inv[a] for a in T1], [inv[a] for a in T2]))
    reps = sorted({find(c) for c in configs})
    return tuple(ProductMap(a, b) for a, b in reps)


def enumerate_product_maps(N: int, all_configs: bool = False) -> list:
    if all_configs:
        labels = range(1, N + 1)
        out = set()
        for E in combinations(labels, 3):
            rest = [a for a in labels if a not in E]
            for r in range(2, len(rest) - 1):
                for S1 in combinations(rest, r):
                    S2 = tuple(a for a in rest if a not in S1)
                    out.add(_config(E + S1, E + S2))
        return [ProductMap(a, b) for a, b in sorted(out)]
    return list(product_map_classes(N))


def _embedding(T: Sequence, g: Sequence | None) -> dict:
    """tau_i o phi_i: standard labels 1..r to T, sending the standard order to g.

    phi_i is the increasing map onto T; tau_i takes the standard order on T
    to the cyclic order g and fixes the smallest label."""
    Ts = sorted(T)
    if g is None:
        seq = Ts
    else:
        seq = Polygon(tuple(g)).starting_at(Ts[0])
        if set(seq) != set(Ts):
            raise ValueError("cyclic order must be on T")
    return {i + 1: a for i, a in enumerate(seq)}


def _embed(form: LinComb, T: Sequence, g: Sequence | None = None) -> LinComb:
    """Form on M0,|T| (words) to SignedPolygons on T."""
    r = len(T)
    psi = _embedding(T, g)
    return LinComb((SignedPolygon.make(Polygon(tuple(w) + (r,)).relabel(psi)), c)
                   for w, c in form.items())


def _shuffle3_lc(a: LinComb, b: LinComb, E) -> LinComb:
    acc: dict = {}
    for p, c in a.items():
        for q, d in b.items():
            for s, e in shuffle3(p, q, E).items():
                acc[s] = acc.get(s, 0) + c * d * e
    return LinComb(acc)


def pair_product(N: int, pm: ProductMap, form1: LinComb, form2: LinComb,
                 g1: Sequence | None = None, g2: Sequence | None = None) -> LinComb:
    """Standard-cell form equal to the product of two standard pairs.

    With cyclic orders g_i on T_i (default: the standard order), this is
    sum over cells g of g1 sh_E g2 of tau_g^{-1}(tau_1 form1 sh_E tau_2 form2).
    Returns a form on M0,N (LinComb of words on 1..N-1)."""
    E = pm.E
    a = _embed(form1, pm.T1, g1)
    b = _embed(form2, pm.T2, g2)
    prod = _shuffle3_lc(a, b, E)
    d = standard_polygon(N)
    c1 = LinComb.of(SignedPolygon.make(d.restrict(pm.T1) if g1 is None else Polygon(tuple(g1))))
    c2 = LinComb.of(SignedPolygon.make(d.restrict(pm.T2) if g2 is None else Polygon(tuple(g2))))
    cells = _shuffle3_lc(c1, c2, E)
    acc: dict = {}
    for cell, s in cells.items():
        s *= cell.sign
        inv = invert(cell_relabelling(cell.polygon))
        for sp, c in prod.items():
            t = act(inv, sp)          # any reversal sign is folded into t.sign
            w = t.polygon.word(N)
            acc[w] = acc.get(w, 0) + s * c * t.sign
    return LinComb(acc)


def product_map_relation(N: int, pm: ProductMap, k1: int, k2: int,
                         check_convergent: bool = False) -> tuple:
    """(product symbol, coordinates of the product form in the basis of M0,N)."""
    r1, r2 = len(pm.T1), len(pm.T2)
    f = pair_product(N, pm, basis_form(r1, k1), basis_form(r2, k2))
    coords = expand_in_basis(f, N, check_convergent=check_convergent)
    sym = product_symbol([basis_symbol(r1, k1), basis_symbol(r2, k2)])
    return sym, coords


def product_relations(N: int, all_configs: bool = False) -> list:
    """Rows FormalProduct(B_r1.k1, B_r2.k2) - sum_j c_j B_N.j = 0."""
    out = []
    for pm in enumerate_product_maps(N, all_configs=all_configs):
        r1, r2 = len(pm.T1), len(pm.T2)
        for k1 in range(len(insertion_basis(r1))):
            for k2 in range(len(insertion_basis(r2))):
                sym, coords = product_map_relation(N, pm, k1, k2)
                row: dict = {sym: 1}
                for j, c in coords.items():
                    row[basis_symbol(N, j)] = -c
                out.append(Relation(row, f"product {pm.T1}|{pm.T2} ({k1},{k2})"))
    return out


# --- relation systems -------------------------------------------------------

@dataclass
class RelationSystem:
    N: int
    columns: list
    rows: list = field(default_factory=list)     # list of (dict col -> Rational, tag)

    def to_json(self) -> dict:
        idx = {c: i for i, c in enumerate(self.columns)}
        rows = []
        for row, tag in self.rows:
            items = sorted(((idx[c], v) for c, v in row.items()))
            rows.append({"cols": [i for i, _ in items],
                         "vals": [_fmt(v) for _, v in items], "tag": tag})
        return {"n": self.N, "columns": self.columns, "rows": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "RelationSystem":
        cols = obj["columns"]
        rows = []
        for r in obj["rows"]:
            rows.append(({cols[i]: Fraction(v) for i, v in zip(r["cols"], r["vals"])}, r.get("tag", "")))
        return cls(obj["n"], cols, rows)

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


def _fmt(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def build_relation_system(N: int, families: Sequence[str] = ("dihedral", "product"),
                          lower: dict | None = None, generators_only: bool | None = None,
                          all_configs: bool = False) -> RelationSystem:
    """All relations of weight N-3 with products written in lower generators.

    `lower` maps each lower-weight basis symbol to its expression
    {monomial tuple: coefficient} in primitive generators; it is computed
    recursively when not given.
    """
    from .reducer import reduce_system  # local import, reducer depends on us

    if generators_only is None:
        generators_only = N >= 9
    if lower is None and "product" in families and N >= 7:
        lower = {}
        for M in range(5, N - 1):
            sysM = build_relation_system(M, families, lower=dict(lower),
                                         generators_only=generators_only, all_configs=all_configs)
            rep = reduce_system(sysM)
            lower.update(rep.monomial_expressions())
    cols = [basis_symbol(N, k) for k in range(len(insertion_basis(N)))]
    rows: list = []
    if "dihedral" in families:
        for rel in dihedral_relations(N, generators_only=generators_only):
            rows.append((rel.row, rel.tag))
    mono_cols: set = set()
    if "product" in families and N >= 7:
        for rel in product_relations(N, all_configs=all_configs):
            row: dict = {}
            for s, c in rel.row.items():
                if "*" not in s:
                    row[s] = row.get(s, 0) + c
                    continue
                a, b = s.split("*")
                for m, v in _multiply(lower[a], lower[b]).items():
                    name = "*".join(m)
                    mono_cols.add(name)
                    row[name] = row.get(name, 0) + c * v
            row = {s: v for s, v in row.items() if v}
            if row:
                rows.append((row, rel.tag))
    cols += sorted(mono_cols, key=_col_key)
    return RelationSystem(N, cols, rows)


def _multiply(x: dict, y: dict) -> dict:
    out: dict = {}
    for m1, a in x.items():
        for m2, b in y.items():
            m = tuple(sorted(m1 + m2, key=lambda s: (parse_symbol(s), s)))
            out[m] = out.get(m, 0) + a * b
    return {m: v for m, v in out.items() if v}
