"""Cell-forms and cell-functions on M0,N.

Marked points carry integer labels 1..N in standard order:
1 is the point 0, i is t_{i-1} for 2 <= i <= N-2, N-1 is the point 1 and N
is infinity. A form on M0,N is stored as a LinComb of words w on 1..N-1;
the word w stands for the cyclic order (w, N), i.e. infinity last.

Sign convention: the cell-function of a cyclic order (z_1, ..., z_N) is
1/prod (z_{i+1} - z_i) with the two factors involving infinity dropped.
This agrees with the normalization through the unique ordering fixing the
last point, and a reversal multiplies it by (-1)^N.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import LinComb, shuffle_many, to_01, concat
from .polygons import Polygon, SignedPolygon, shuffle_relative


# --- naming -----------------------------------------------------------------

def point_name(label: int, N: int) -> str:
    if label == 1:
        return "0"
    if label == N - 1:
        return "1"
    if label == N:
        return "oo"
    if 2 <= label <= N - 2:
        return f"t{label - 1}"
    raise ValueError(f"label {label} out of range for N={N}")


def point_label(name: str, N: int) -> int:
    name = name.strip()
    if name == "0":
        return 1
    if name == "1":
        return N - 1
    if name in ("oo", "inf", "∞"):
        return N
    m = re.fullmatch(r"t_?(\d+)", name)
    if not m:
        raise ValueError(f"bad marked point name {name!r}")
    i = int(m.group(1))
    if not 1 <= i <= N - 3:
        raise ValueError(f"{name} out of range for N={N}")
    return i + 1


def word_of_cycle(labels: Sequence[int], N: int) -> tuple:
    """Rotate a cyclic order on 1..N so infinity is last; returns the word."""
    return Polygon(tuple(labels)).word(N)


def build_form(N: int, segments: Sequence) -> LinComb:
    """A cell-form written in shuffle style.

    Each segment is a marked-point name, or a tuple of blocks to shuffle,
    each block being a name or a sequence of names. For example
    ["0", "1", "t1", "oo", ("t2", "t3")] is [0,1,t1,oo,t2 sh t3].
    The cyclic order is rotated so that infinity comes last.
    """
    parts = []
    for seg in segments:
        if isinstance(seg, str):
            parts.append(LinComb.of((point_label(seg, N),)))
        else:
            blocks = []
            for b in seg:
                names = [b] if isinstance(b, str) else list(b)
                blocks.append(tuple(point_label(x, N) for x in names))
            parts.append(shuffle_many(blocks))
    cyc = concat(*parts)
    return cyc.map(lambda c: word_of_cycle(c, N))


def parse_form(text: str, N: int | None = None) -> LinComb:
    """Parse "[0,1,t1,oo,sh(t2,t3)]"; sh args may be "(t2 t4)" blocks."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError("cell-form must be enclosed in [...]")
    body = s[1:-1]
    segs: list = []
    toks = []
    depth = 0
    cur = ""
    for ch in body:
        if ch == "," and depth == 0:
            toks.append(cur.strip())
            cur = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur += ch
    if cur.strip():
        toks.append(cur.strip())
    if N is None:
        N = len(re.findall(r"oo|t\d+|\b0\b|\b1\b", body))
    for t in toks:
        if t.startswith("sh(") and t.endswith(")"):
            inner = t[3:-1]
            blocks = []
            for b in re.findall(r"\([^)]*\)|[^,\s()]+", inner):
                if b.startswith("("):
                    blocks.append(tuple(b[1:-1].split()))
                else:
                    blocks.append(b)
            segs.append(tuple(blocks))
        else:
            segs.append(t)
    return build_form(N, segs)


def format_word(w: Sequence[int], N: int) -> str:
    return "[" + ",".join(point_name(a, N) for a in tuple(w) + (N,)) + "]"


def format_form(x: LinComb, N: int) -> str:
    """Terms rendered as [0,1,t1,oo,t2] in 01 normal position when possible."""
    if not x:
        return "0"
    out = []
    for w, c in x.items():
        cyc = _display_cycle(w, N)
        term = "[" + ",".join(point_name(a, N) for a in cyc) + "]"
        if c == 1:
            out.append(("+", term))
        elif c == -1:
            out.append(("-", term))
        else:
            cc = Fraction(c)
            out.append(("-" if cc < 0 else "+", f"{abs(cc)}*{term}"))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sg, t in out[1:]:
        s += f" {sg} {t}"
    return s


def _display_cycle(w, N):
    # start at the point 0, the usual way of writing cell-forms
    cyc = tuple(w) + (N,)
    i = cyc.index(1)
    return cyc[i:] + cyc[:i]


# --- evaluation -------------------------------------------------------------

def _values(point: Sequence, N: int) -> dict:
    if len(point) != N - 3:
        raise ValueError(f"need {N - 3} coordinates")
    v = {1: Fraction(0), N - 1: Fraction(1), N: None}
    for i, t in enumerate(point):
        v[i + 2] = Fraction(t)
    return v


def cycle_value(cycle: Sequence, values: Mapping):
    """1/prod of successive differences around the cycle; None means infinity."""
    den = 1
    n = len(cycle)
    for i in range(n):
        a, b = values[cycle[i]], values[cycle[(i + 1) % n]]
        if a is None or b is None:
            continue
        diff = b - a
        if diff == 0:
            raise ZeroDivisionError("evaluation at a pole")
        den *= diff
    return Fraction(1) / den


def eval_cell_function(cycle: Sequence | Polygon, point: Sequence, N: int | None = None) -> Fraction:
    """Exact value of the cell-function of a cyclic order on 1..N at (t_1..t_l)."""
    if isinstance(cycle, Polygon):
        cycle = cycle.labels
    if N is None:
        N = len(cycle)
    return cycle_value(tuple(cycle), _values(point, N))


def eval_form(x: LinComb, point: Sequence, N: int) -> Fraction:
    vals = _values(point, N)
    tot = Fraction(0)
    for w, c in x.items():
        tot += c * cycle_value(tuple(w) + (N,), vals)
    return tot


def eval_signed(x: LinComb, point: Sequence, N: int) -> Fraction:
    """Evaluate a LinComb of SignedPolygon / Polygon on labels 1..N."""
    vals = _values(point, N)
    tot = Fraction(0)
    for p, c in x.items():
        if isinstance(p, SignedPolygon):
            c, p = c * p.sign, p.polygon
        tot += c * cycle_value(p.labels, vals)
    return tot


# --- products and the 01 basis ----------------------------------------------

def multiply_cell_functions(gA: Polygon, gB: Polygon) -> LinComb:
    """<gA> * <gB> / <gA restricted to the intersection>, as polygons."""
    return shuffle_relative(gA, gB)


def polygons_to_words(x: LinComb, d: int | None = None) -> LinComb:
    """LinComb of (Signed)Polygon on S+{d} to words on S (d read last)."""
    def f(p):
        s = 1
        if isinstance(p, SignedPolygon):
            s, p = p.sign, p.polygon
        dd = max(p.labels) if d is None else d
        return LinComb.of(p.word(dd), s)
    return x.map(f)


def to_01_basis(x: LinComb, n: int | None = None) -> LinComb:
    """Representative in the 1n-word basis; accepts words or polygons."""
    if not x:
        return LinComb()
    if not isinstance(x.support()[0], tuple):
        x = polygons_to_words(x)
    return to_01(x, n)


# --- Arnol'd forms ----------------------------------------------------------

def arnold_decompose(eps: Sequence[str]) -> LinComb:
    """Omega(eps) = dt_1..dt_l / prod (t_i - eps_i) as a combination of 01 forms.

    eps_i is a marked point name: "0", "1" or "t_j" with j < i. Each factor
    1/(t_i - eps_i) is the three-point cell-function <eps_i, t_i, oo>. The
    product is built by iterated cell-function shuffles relative to the
    common points {eps_i, oo}; dividing by <eps_i, oo> = 1 is free. The
    result is then brought to the 01 basis, which changes nothing as a
    function since one-element shuffles vanish identically.
    """
    l = len(eps)
    N = l + 3
    lab = [point_label(e, N) for e in eps]
    for i, a in enumerate(lab):
        if not (a in (1, N - 1) or 2 <= a < i + 2):
            raise ValueError(f"malformed eps_{i + 1} = {eps[i]!r}")
    if l and lab[0] not in (1, N - 1):
        raise ValueError("eps_1 must be 0 or 1")
    acc = LinComb.of(Polygon((1, N - 1, N)))
    for i, a in enumerate(lab):
        g = Polygon((a, i + 2, N))
        nxt: dict = {}
        for p, c in acc.items():
            for r, c2 in shuffle_relative(p, g).items():
                nxt[r] = nxt.get(r, 0) + c * c2
        acc = LinComb(nxt)
    return to_01(acc.map(lambda p: p.word(N)), N - 1)


def arnold_value(eps: Sequence[str], point: Sequence) -> Fraction:
    """Direct value of 1/prod (t_i - eps_i)."""
    N = len(eps) + 3
    v = _values(point, N)
    den = Fraction(1)
    for i, e in enumerate(eps):
        den *= v[i + 2] - v[point_label(e, N)]
    return 1 / den


def arnold_forms(l: int) -> list:
    out = [[]]
    for i in range(l):
        choices = ["0", "1"] + [f"t{j}" for j in range(1, i + 1)]
        if i == 0:
            choices = ["0", "1"]
        out = [e + [c] for e in out for c in choices]
    return [tuple(e) for e in out]


# --- MZV forms --------------------------------------------------------------

def composition_xy(comp: Sequence[int]) -> str:
    """zeta(n_1,...,n_r) -> word x^{n_1-1} y ... x^{n_r-1} y."""
    if not comp or comp[0] < 2 or any(k < 1 for k in comp):
        raise ValueError(f"divergent or malformed composition {tuple(comp)}")
    return "".join("x" * (k - 1) + "y" for k in comp)


def composition_from_xy(word: str) -> tuple:
    out = []
    k = 1
    for ch in word:
        if ch == "x":
            k += 1
        else:
            out.append(k)
            k = 1
    return tuple(out)


def composition_eps(comp: Sequence[int]) -> tuple:
    """(eps_1..eps_l): t_i carries y (eps=1) or x (eps=0).

    The xy word is read from t_l down to t_1, so t_1 is always a y."""
    w = composition_xy(comp)
    return tuple("1" if ch == "y" else "0" for ch in reversed(w))


def mzv_to_shuffle_form(comp: Sequence[int]) -> LinComb:
    """[0, 1, t_i1 sh ... sh t_ir, oo, t_j1 sh ... sh t_js] expanded."""
    eps = composition_eps(comp)
    N = len(eps) + 3
    ys = tuple(f"t{i + 1}" for i, e in enumerate(eps) if e == "1")
    xs = tuple(f"t{i + 1}" for i, e in enumerate(eps) if e == "0")
    segs: list = ["0", "1"]
    if ys:
        segs.append(ys)
    segs.append("oo")
    if xs:
        segs.append(xs)
    return build_form(N, segs)


def mzv_form(comp: Sequence[int]) -> LinComb:
    """The form that integrates to zeta(comp) over the standard cell.

    Pointwise it equals prod_{y} 1/(1-t_i) prod_{x} 1/t_j, and it is
    (-1)^weight times the shuffle form above.
    """
    return (-1) ** sum(comp) * mzv_to_shuffle_form(comp)


def mzv_integrand(comp: Sequence[int], point: Sequence) -> Fraction:
    eps = composition_eps(comp)
    v = Fraction(1)
    for e, t in zip(eps, point):
        t = Fraction(t)
        v /= (1 - t) if e == "1" else t
    return v


def dual_composition(comp: Sequence[int]) -> tuple:
    """Duality: reverse the xy word and swap x and y."""
    w = composition_xy(comp)
    sw = "".join("y" if ch == "x" else "x" for ch in reversed(w))
    return composition_from_xy(sw)


# --- pole orders ------------------------------------------------------------

def pole_order(cycle: Sequence, part: Iterable) -> int:
    """Order of the cell-form of `cycle` along the divisor of a stable partition.

    2 ord_D = (N - 4) - sum over cyclically adjacent pairs of the indicator
    that both lie on the same side of D. Here N - 4 = l - 1.
    """
    A = set(part)
    n = len(cycle)
    same = sum(1 for i in range(n) if (cycle[i] in A) == (cycle[(i + 1) % n] in A))
    val = (n - 4) - same
    assert val % 2 == 0
    return val // 2
