"""Orchestration: counts table, chained reductions, numeric predictions."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cellforms import mzv_form
from .convergence import c0
from .insertion import dimension_formula, insertion_basis, insertion_shuffle_count
from .numeric import integrate, mzv_reference
from .reducer import ReductionReport, reduce_system
from .relations import build_relation_system, expand_in_basis, basis_symbol, parse_symbol


def fixtures_dir() -> Path:
    env = os.environ.get("CELLZETA_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "fixtures"


def load_fixture(n: int, name: str):
    p = fixtures_dir() / f"n{n}" / f"{name}.json"
    if not p.exists():
        return None
    with open(p) as fh:
        return json.load(fh)


def counts_row(n: int) -> dict:
    """c0, |L|, |W| and the dimension formula for M0,n."""
    row = {"n": n, "c0": c0(n)}
    if n >= 5:
        row["lyndon_insertion_shuffles"] = insertion_shuffle_count(n - 1)
        row["insertion_basis"] = len(insertion_basis(n))
        row["dimension_formula"] = dimension_formula(n)
    else:
        row["lyndon_insertion_shuffles"] = insertion_shuffle_count(n - 1) if n >= 2 else 0
        row["insertion_basis"] = 0
        row["dimension_formula"] = 0
    return row


def reports_upto(N: int, families=("dihedral", "product"), seed: int = 0,
                 generators_only: bool | None = None) -> dict:
    """Reduction reports for every M0,M with 5 <= M <= N, lower ones feeding products."""
    lower: dict = {}
    reports = {}
    for M in range(5, N + 1):
        system = build_relation_system(M, families, lower=dict(lower),
                                       generators_only=generators_only)
        rep = reduce_system(system, seed=seed)
        reports[M] = rep
        lower.update(rep.monomial_expressions())
    return reports


def generator_values(reports: dict) -> dict:
    """Numeric value of every free generator, weight by weight.

    A new primitive of weight w is pinned by the single zeta value zeta(w):
    its form is expanded in the basis and rewritten in the generators.
    """
    values: dict = {}
    for M in sorted(reports):
        rep = reports[M]
        w = M - 3
        for f in rep.free:
            if "*" in f:
                v = 1.0
                for a in f.split("*"):
                    v *= values[a]
                values[f] = v
        prims = rep.primitive
        if not prims:
            continue
        if len(prims) > 1:
            raise ValueError(f"several new primitives at weight {w}")
        p = prims[0]
        coords = expand_in_basis(mzv_form((w,)), M)
        acc: dict = {}
        for k, c in coords.items():
            for f, e in rep.expressions[basis_symbol(M, k)].items():
                acc[f] = acc.get(f, 0) + c * e
        a = acc.pop(p, 0)
        if not a:
            raise ValueError(f"zeta({w}) does not involve {p}")
        rest = sum(float(c) * values[f] for f, c in acc.items())
        values[p] = (mzv_reference((w,)) - rest) / float(a)
    return values


def predicted_integrals(rep: ReductionReport, values: dict) -> dict:
    out = {}
    for col, expr in rep.expressions.items():
        if "*" in col:
            continue
        out[col] = sum(float(c) * values[f] for f, c in expr.items())
    return out


@dataclass
class NumericRow:
    symbol: str
    estimate: float
    standard_error: float
    predicted: float

    @property
    def sigmas(self) -> float:
        if self.standard_error == 0:
            return 0.0 if self.estimate == self.predicted else float("inf")
        return abs(self.estimate - self.predicted) / self.standard_error


def numeric_check(N: int, reports: dict, samples: int, seed: int,
                  indices=None) -> list:
    values = generator_values(reports)
    pred = predicted_integrals(reports[N], values)
    rows = []
    basis = insertion_basis(N)
    for k in (range(len(basis)) if indices is None else indices):
        sym = basis_symbol(N, k)
        est = integrate(basis[k].expansion, N, samples=samples, seed=seed)
        rows.append(NumericRow(sym, est.mean, est.standard_error, pred[sym]))
    return rows


@dataclass
class PipelineResult:
    N: int
    stage: str
    report: ReductionReport | None = None
    numeric: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.N,
            "stage": self.stage,
            "report": self.report.to_json() if self.report else None,
            "numeric": [r.__dict__ | {"sigmas": r.sigmas} for r in self.numeric],
            "mismatches": self.mismatches,
        }


def run_pipeline(N: int, samples: int = 0, seed: int = 0) -> PipelineResult:
    """basis -> relations -> reduce -> optional numeric check, compared to fixtures."""
    res = PipelineResult(N, "basis")
    nb = len(insertion_basis(N))
    fx = load_fixture(N, "golden") or {}
    gold = dict(fx.get("reference", {}))
    gold.update(fx.get("derived", {}))
    if "c0" in gold and gold["c0"] != c0(N):
        res.mismatches.append(f"c0 {c0(N)} != {gold['c0']}")
    if "insertion_basis" in gold and gold["insertion_basis"] != nb:
        res.mismatches.append(f"basis size {nb} != {gold['insertion_basis']}")
    res.stage = "reduce"
    reports = reports_upto(N, seed=seed)
    rep = reports[N]
    res.report = rep
    if "dimension" in gold and gold["dimension"] != rep.dimension:
        res.mismatches.append(f"dimension {rep.dimension} != {gold['dimension']}")
    if "rank" in gold and gold["rank"] != rep.rank:
        res.mismatches.append(f"rank {rep.rank} != {gold['rank']}")
    if "free" in gold and gold["free"] != rep.free:
        res.mismatches.append(f"generators {rep.free} != {gold['free']}")
    for col, val in gold.get("ratios", {}).items():
        got = rep.ratio(col)
        if got != Fraction(val):
            res.mismatches.append(f"{col} ratio {got} != {val}")
    res.stage = "done"
    if samples:
        res.stage = "numeric"
        res.numeric = numeric_check(N, reports, samples, seed)
        for r in res.numeric:
            if r.sigmas > 3:
                res.mismatches.append(f"{r.symbol} off by {r.sigmas:.1f} sigma")
        res.stage = "done"
    return res


def mzv_decomposition(comp) -> dict:
    """Insertion-basis coordinates of the standard form of zeta(comp)."""
    N = sum(comp) + 3
    return {basis_symbol(N, k): c for k, c in sorted(expand_in_basis(mzv_form(tuple(comp)), N).items())}


def symbol_sort_key(s: str):
    return [parse_symbol(f) for f in s.split("*")]
