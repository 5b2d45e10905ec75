"""Exact sparse linear algebra over Q for relation systems.

Rows are scaled to primitive integer vectors and eliminated fraction-free
(a*row - b*pivot, then division by the content). A modular rank modulo two
random 30-bit primes cross-checks every exact rank.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np
from sympy import isprime


def _primitive(row: dict) -> dict:
    """Scale a rational row to coprime integers with positive leading entry."""
    if not row:
        return row
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    r = {k: int(v * den) for k, v in row.items()}
    g = 0
    for v in r.values():
        g = gcd(g, v)
    lead = r[min(r)]
    if lead < 0:
        g = -g
    return {k: v // g for k, v in r.items()}


def _combine(a: int, row: dict, b: int, piv: dict) -> dict:
    """a*row - b*piv, reduced to primitive form."""
    out = {}
    for k, v in row.items():
        out[k] = a * v
    for k, v in piv.items():
        s = out.get(k, 0) - b * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


@dataclass
class EchelonResult:
    ncols: int
    pivots: dict            # pivot column -> integer row (RREF up to scaling)
    rank: int

    @property
    def pivot_columns(self) -> list:
        return sorted(self.pivots)

    @property
    def free_columns(self) -> list:
        return [c for c in range(self.ncols) if c not in self.pivots]


def rref(rows: Sequence[dict], ncols: int, order: str = "sparse") -> EchelonResult:
    """Reduced echelon form of sparse rational rows (keys are column indices).

    order="sparse" processes rows by increasing number of nonzeros, a cheap
    stand-in for Markowitz pivoting that keeps fill-in low.
    """
    prim = [_primitive(dict(r)) for r in rows if r]
    if order == "sparse":
        prim.sort(key=lambda r: (len(r), min(r)))
    pivots: dict = {}
    for r in prim:
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                break
            a, b = p[c], r[c]
            g = gcd(a, b)
            r = _combine(a // g, r, b // g, p)
        if r:
            if r[min(r)] < 0:
                r = {k: -v for k, v in r.items()}
            pivots[min(r)] = r
    # back substitution, last pivot first
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        changed = True
        while changed:
            changed = False
            for k in sorted(r):
                if k != c and k in pivots and k > c:
                    p = pivots[k]
                    a, b = p[k], r[k]
                    g = gcd(a, b)
                    r = _combine(a // g, r, b // g, p)
                    changed = True
                    break
        if r[c] < 0:
            r = {k: -v for k, v in r.items()}
        pivots[c] = r
    return EchelonResult(ncols, pivots, len(pivots))


def _to_mod(v, p: int) -> int:
    v = Fraction(v)
    return v.numerator % p * pow(v.denominator % p, -1, p) % p


def independent_rows_mod_p(rows: Sequence[dict], p: int) -> list:
    """Indices of rows that raise the rank over GF(p), sparsest rows first."""
    red = []
    for i, r in enumerate(rows):
        m = {k: _to_mod(v, p) for k, v in r.items()}
        m = {k: v for k, v in m.items() if v}
        if m:
            red.append((len(m), i, m))
    red.sort(key=lambda t: (t[0], t[1]))
    pivots: dict = {}
    used = []
    for _, i, r in red:
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                break
            f = r[c]
            for k, v in piv.items():
                x = (r.get(k, 0) - f * v) % p
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
        if r:
            c = min(r)
            inv = pow(r[c], -1, p)
            pivots[c] = {k: v * inv % p for k, v in r.items()}
            used.append(i)
    return sorted(used)


def rank_mod_p(rows: Sequence[dict], ncols: int, p: int) -> int:
    """Rank over GF(p) by sparse elimination."""
    return len(independent_rows_mod_p(rows, p))


def rank_mod_p_dense(rows: Sequence[dict], ncols: int, p: int) -> int:
    """Dense numpy variant of rank_mod_p (p < 2^31), kept as a cross-check."""
    if not rows or ncols == 0:
        return 0
    M = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        for k, v in r.items():
            M[i, k] = _to_mod(v, p)
    rank = 0
    nrows = M.shape[0]
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(M[rank:, c])[0]
        if nz.size == 0:
            continue
        i = rank + nz[0]
        if i != rank:
            M[[rank, i]] = M[[i, rank]]
        inv = pow(int(M[rank, c]), -1, p)
        M[rank] = (M[rank] * inv) % p
        col = M[rank + 1:, c].copy()
        nzr = np.nonzero(col)[0] + rank + 1
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(M[nzr, c], M[rank]) % p) % p
        rank += 1
    return rank


def random_prime(rng: random.Random, bits: int = 30) -> int:
    while True:
        q = rng.randrange(2 ** (bits - 1), 2 ** bits) | 1
        if isprime(q):
            return q


def modular_ranks(rows, ncols, seed: int = 0, count: int = 2) -> list:
    rng = random.Random(seed)
    return [rank_mod_p(rows, ncols, random_prime(rng)) for _ in range(count)]


# --- relation system reduction ----------------------------------------------

@dataclass
class ReductionReport:
    N: int
    columns: list
    rank: int
    free: list                       # column names of the free generators
    expressions: dict                # column -> {free column: Fraction}
    modular_ranks: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.free)

    @property
    def primitive(self) -> list:
        """Free generators that are not products."""
        return [f for f in self.free if "*" not in f]

    def monomial_expressions(self) -> dict:
        """Each insertion symbol as {monomial tuple: coefficient} in primitives."""
        out = {}
        for col, expr in self.expressions.items():
            if "*" in col:
                continue
            out[col] = {tuple(f.split("*")): c for f, c in expr.items()}
        return out

    def ratio(self, col: str, generator: str | None = None):
        expr = self.expressions[col]
        if generator is None:
            if len(self.free) != 1:
                raise ValueError("several generators; name one")
            generator = self.free[0]
        return expr.get(generator, Fraction(0))

    def to_json(self) -> dict:
        return {
            "n": self.N,
            "rank": self.rank,
            "dimension": self.dimension,
            "free": self.free,
            "modular_ranks": self.modular_ranks,
            "expressions": {c: {f: _fmt(v) for f, v in e.items()} for c, e in self.expressions.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionReport":
        expr = {c: {f: Fraction(v) for f, v in e.items()} for c, e in obj["expressions"].items()}
        return cls(obj["n"], list(expr), obj["rank"], obj["free"], expr, obj.get("modular_ranks", []))


def _fmt(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class InconsistentSystem(ValueError):
    pass


def reduce_system(system, seed: int = 0, check_modular: bool = True,
                  prepass: bool = True) -> ReductionReport:
    """Solve a RelationSystem: free generators are the non-pivot columns.

    Columns are ordered with insertion symbols first and product monomials
    last, so products become generators whenever possible. With prepass
    the exact elimination only sees rows found independent modulo a random
    prime; every input row is still checked exactly afterwards.
    """
    cols = list(system.columns)
    idx = {c: i for i, c in enumerate(cols)}
    rows = []
    for row, tag in system.rows:
        r = {idx[c]: v for c, v in row.items() if v}
        if r:
            rows.append(r)
    if prepass:
        # rows independent mod p span the same space unless p is unlucky;
        # _verify below checks every dropped row exactly
        keep = independent_rows_mod_p(rows, random_prime(random.Random(seed + 1)))
        ech = rref([rows[i] for i in keep], len(cols))
    else:
        ech = rref(rows, len(cols))
    mods = modular_ranks(rows, len(cols), seed=seed) if check_modular else []
    if mods and any(m != ech.rank for m in mods):
        raise AssertionError(f"exact rank {ech.rank} disagrees with modular ranks {mods}")
    free = [cols[c] for c in ech.free_columns]
    expressions: dict = {}
    for c in range(len(cols)):
        if c in ech.pivots:
            r = ech.pivots[c]
            piv = r[c]
            expressions[cols[c]] = {cols[k]: Fraction(-v, piv) for k, v in r.items() if k != c}
        else:
            expressions[cols[c]] = {cols[c]: Fraction(1)}
    rep = ReductionReport(system.N, cols, ech.rank, free, expressions, mods)
    _verify(rep, system)
    return rep


def _verify(rep: ReductionReport, system):
    """Substituting the expressions into every row must give exactly zero."""
    for row, tag in system.rows:
        acc: dict = {}
        for c, v in row.items():
            for f, w in rep.expressions[c].items():
                acc[f] = acc.get(f, 0) + v * w
        if any(acc.values()):
            raise InconsistentSystem(f"row not satisfied: {tag}")


def zagier_dims(kmax: int) -> list:
    d = [1, 0, 1]
    while len(d) <= kmax:
        d.append(d[-2] + d[-3])
    return d[:kmax + 1]
