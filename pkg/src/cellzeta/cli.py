"""cellzeta command-line front end."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations

from .cellforms import format_form, mzv_form
from .convergence import (
    enumerate_convergent_polygons,
    enumerate_special_convergent_words,
    is_convergent_word,
)
from .algebra import is_1n_word
from .insertion import insertion_basis
from .numeric import integrate
from .pipeline import (
    counts_row,
    generator_values,
    mzv_decomposition,
    predicted_integrals,
    reports_upto,
    run_pipeline,
)
from .reducer import reduce_system, zagier_dims
from .relations import RelationSystem, basis_symbol, build_relation_system

FORMATS = ("json", "text")


@dataclass
class RunConfig:
    n: int | None
    command: str
    format: str = "text"
    seed: int = 0
    samples: int = 10 ** 6
    jobs: int = 1
    out: str | None = None

    def check_moduli(self, lo: int = 5, hi: int = 9):
        if self.n is None or not lo <= self.n <= hi:
            raise SystemExit(f"--n must be between {lo} and {hi}")


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False)


# --- commands ---------------------------------------------------------------

def cmd_counts(cfg: RunConfig, args) -> int:
    ns = [cfg.n] if cfg.n is not None else list(range(4, 9))
    rows = []
    z = zagier_dims(max(ns))
    for n in ns:
        r = counts_row(n)
        r["zagier_d"] = z[n - 3] if n >= 3 else None
        rows.append(r)
    if cfg.format == "json":
        _emit(cfg, _dumps(rows))
        return 0
    head = f"{'n':>3} {'c0':>6} {'|L|':>7} {'|W|':>6} {'formula':>8} {'d_w':>4}"
    lines = [head]
    for r in rows:
        lines.append(f"{r['n']:>3} {r['c0']:>6} {r['lyndon_insertion_shuffles']:>7} "
                     f"{r['insertion_basis']:>6} {r['dimension_formula']:>8} {r['zagier_d']:>4}")
    _emit(cfg, "\n".join(lines))
    return 0


def _words(n: int, special: bool, restrict: bool) -> list:
    if special:
        return enumerate_special_convergent_words(n, restrict_1n=restrict)
    out = []
    for w in permutations(range(1, n + 1)):
        if restrict and not is_1n_word(w, n):
            continue
        if is_convergent_word(w):
            out.append(w)
    return out


def cmd_convergent_words(cfg: RunConfig, args) -> int:
    if cfg.n is None or cfg.n < 1:
        raise SystemExit("--n (alphabet size) is required")
    if args.polygons:
        words = [p.polygon.labels for p in enumerate_convergent_polygons(cfg.n)]
    else:
        words = _words(cfg.n, args.special, args.restrict_1n)
    if cfg.format == "json":
        _emit(cfg, _dumps({"n": cfg.n, "words": [list(w) for w in words], "count": len(words)}))
    else:
        lines = ["".join(map(str, w)) if cfg.n < 10 else " ".join(map(str, w)) for w in words]
        lines.append(f"# count {len(words)}")
        _emit(cfg, "\n".join(lines))
    return 0


def cmd_insertion_basis(cfg: RunConfig, args) -> int:
    cfg.check_moduli()
    N = cfg.n
    basis = insertion_basis(N)
    if cfg.format == "json":
        items = []
        for k, el in enumerate(basis):
            items.append({"symbol": basis_symbol(N, k), "form": el.expansion.to_json(),
                          "provenance": el.provenance()})
        _emit(cfg, _dumps(items))
    else:
        lines = []
        for k, el in enumerate(basis):
            lines.append(f"{basis_symbol(N, k)}  {el.describe()}")
            lines.append(f"    {format_form(el.expansion, N)}")
        lines.append(f"# count {len(basis)}")
        _emit(cfg, "\n".join(lines))
    return 0


def cmd_relations(cfg: RunConfig, args) -> int:
    cfg.check_moduli()
    fams = [f.strip() for f in args.families.split(",") if f.strip()]
    bad = [f for f in fams if f not in ("dihedral", "product")]
    if bad:
        raise SystemExit(f"unknown families: {bad}")
    system = build_relation_system(cfg.n, fams)
    _emit(cfg, _dumps(system.to_json()))
    return 0


def cmd_reduce(cfg: RunConfig, args) -> int:
    with open(args.system) as fh:
        system = RelationSystem.from_json(json.load(fh))
    rep = reduce_system(system, seed=cfg.seed)
    text = _dumps(rep.to_json())
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    if cfg.format == "text":
        print(f"n={rep.N} columns={len(rep.columns)} rank={rep.rank} "
              f"dimension={rep.dimension} free={','.join(rep.free)}")
    elif not args.report:
        _emit(cfg, text)
    return 0


def cmd_pipeline(cfg: RunConfig, args) -> int:
    cfg.check_moduli()
    samples = cfg.samples if args.numeric else 0
    try:
        res = run_pipeline(cfg.n, samples=samples, seed=cfg.seed)
    except MemoryError:
        print(json.dumps({"n": cfg.n, "stage": "aborted", "reason": "memory"}))
        return 2
    if cfg.format == "json":
        _emit(cfg, _dumps(res.to_json()))
    else:
        rep = res.report
        lines = [f"n={cfg.n} stage={res.stage} basis={len(rep.columns) - sum('*' in c for c in rep.columns)}"
                 f" rank={rep.rank} dimension={rep.dimension}",
                 f"generators: {', '.join(rep.free)}"]
        if rep.dimension == 1:
            g = rep.free[0]
            for c in rep.columns:
                if "*" not in c:
                    lines.append(f"  {c} = {rep.ratio(c)} {g}")
        for r in res.numeric:
            lines.append(f"  {r.symbol}: {r.estimate:.5f} +- {r.standard_error:.5f}"
                         f" predicted {r.predicted:.5f} ({r.sigmas:.2f} sigma)")
        for m in res.mismatches:
            lines.append(f"MISMATCH {m}")
        _emit(cfg, "\n".join(lines))
    return 1 if res.mismatches else 0


def _parse_comp(s: str) -> tuple:
    try:
        comp = tuple(int(a) for a in s.replace("(", "").replace(")", "").split(",") if a.strip())
    except ValueError:
        raise SystemExit(f"bad composition {s!r}")
    if not comp or comp[0] < 2 or min(comp) < 1:
        raise SystemExit("divergent composition: the first entry must be at least 2")
    return comp


def cmd_decompose_mzv(cfg: RunConfig, args) -> int:
    comp = _parse_comp(args.composition)
    N = sum(comp) + 3
    dec = mzv_decomposition(comp)
    if cfg.format == "json":
        _emit(cfg, _dumps({"composition": list(comp), "n": N,
                           "form": mzv_form(comp).to_json(),
                           "coordinates": {k: str(v) for k, v in dec.items()}}))
    else:
        lines = [f"zeta({','.join(map(str, comp))}) on M0,{N}: {format_form(mzv_form(comp), N)}"]
        lines.append(" = " + " ".join(f"{'+' if v > 0 else '-'} {abs(v)} {k}" for k, v in dec.items()))
        _emit(cfg, "\n".join(lines))
    return 0


def _one_integral(args):
    N, k, samples, seed = args
    e = integrate(insertion_basis(N)[k].expansion, N, samples=samples, seed=seed)
    return k, e.mean, e.standard_error


def cmd_numeric_check(cfg: RunConfig, args) -> int:
    cfg.check_moduli(5, 8)
    N = cfg.n
    reports = reports_upto(N, seed=cfg.seed)
    pred = predicted_integrals(reports[N], generator_values(reports))
    jobs = [(N, k, cfg.samples, cfg.seed) for k in range(len(insertion_basis(N)))]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_one_integral, jobs))
    else:
        results = [_one_integral(j) for j in jobs]
    rows = []
    fail = 0
    for k, mean, se in results:
        sym = basis_symbol(N, k)
        s = abs(mean - pred[sym]) / se if se else 0.0
        fail += s > 3
        rows.append({"symbol": sym, "estimate": mean, "standard_error": se,
                     "predicted": pred[sym], "sigmas": s})
    if cfg.format == "json":
        _emit(cfg, _dumps(rows))
    else:
        lines = [f"{'form':>8} {'estimate':>11} {'stderr':>9} {'predicted':>11} {'sigma':>6}"]
        for r in rows:
            lines.append(f"{r['symbol']:>8} {r['estimate']:>11.5f} {r['standard_error']:>9.5f}"
                         f" {r['predicted']:>11.5f} {r['sigmas']:>6.2f}")
        lines.append(f"# {len(rows) - fail}/{len(rows)} within 3 sigma")
        _emit(cfg, "\n".join(lines))
    return 1 if fail else 0


COMMANDS = {
    "counts": cmd_counts,
    "convergent-words": cmd_convergent_words,
    "insertion-basis": cmd_insertion_basis,
    "relations": cmd_relations,
    "reduce": cmd_reduce,
    "pipeline": cmd_pipeline,
    "decompose-mzv": cmd_decompose_mzv,
    "numeric-check": cmd_numeric_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cellzeta", parents=[common],
                                description="Cell-zeta values on moduli spaces M0,n.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("counts", parents=[common], help="c0, |L|, |W| and dimensions")
    s = sub.add_parser("convergent-words", parents=[common], help="list convergent words on 1..n")
    s.add_argument("--special", action="store_true")
    s.add_argument("--restrict-1n", action="store_true")
    s.add_argument("--polygons", action="store_true", help="convergent polygons up to reversal")
    sub.add_parser("insertion-basis", parents=[common], help="insertion basis of M0,n")
    s = sub.add_parser("relations", parents=[common], help="dihedral and product-map relations")
    s.add_argument("--families", default="dihedral,product")
    s = sub.add_parser("reduce", parents=[common], help="reduce a relation system exactly")
    s.add_argument("--system", required=True)
    s.add_argument("--report")
    s = sub.add_parser("pipeline", parents=[common], help="basis, relations, reduction, checks")
    s.add_argument("--numeric", action="store_true", help="also run the Monte Carlo check")
    s = sub.add_parser("decompose-mzv", parents=[common], help="zeta(n1,...,nr) in the insertion basis")
    s.add_argument("composition", help="e.g. 2,1,1")
    sub.add_parser("numeric-check", parents=[common], help="Monte Carlo vs reducer predictions")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        n=getattr(args, "n", None),
        command=args.command,
        format=getattr(args, "format", "text"),
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", 10 ** 6),
        jobs=getattr(args, "jobs", 1),
        out=getattr(args, "out", None),
    )
    return COMMANDS[args.command](cfg, args)


if __name__ == "__main__":
    sys.exit(main())
