"""Command line entry point: ``kcramsey <subcommand> ...``; every command prints JSON."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .densities import PairParams, epsilon, lam, m2, m2_pair
from .experiments import (CorpusItem, McConfig, collect_out, mc_threshold, union_bound_report,
                          verify_lemmas)
from .graph import Graph, read_graph
from .hypergraph import build_hypergraph, hypergraph_from_json, hypergraph_to_json
from .hypertree import RestrictionMode, hypertree_run
from .solver import DEFAULT_BUDGET, Status, arrow_graph, find_crit

EXIT_OK = 0
EXIT_LEMMA = 2
EXIT_BUDGET = 3


def _frac(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _floats(text: str) -> list[float]:
    return [float(Fraction(t)) for t in text.split(",") if t]


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


# subcommands ----------------------------------------------------------

def cmd_densities(args) -> int:
    pp = PairParams(args.r, args.ell)
    out = {
        "schema_version": 1,
        "m2_F": _frac(m2(Graph.complete(args.r))),
        "m2_H": _frac(m2(Graph.cycle(args.ell))),
        "m2_pair": _frac(m2_pair(Graph.complete(args.r), Graph.cycle(args.ell))),
    }
    if pp.paper_regime:
        out["epsilon"] = _frac(epsilon(pp))
    if args.graph:
        out["lambda"] = _frac(lam(read_graph(args.graph), pp))
    _emit(out)
    return EXIT_OK


def cmd_enum(args) -> int:
    H = build_hypergraph(read_graph(args.graph), PairParams(args.r, args.ell))
    _emit({"schema_version": 1, "cliques": len(H.cliques()), "cycles": len(H.cycles()),
           "hypervertices": H.num_hypervertices()})
    return EXIT_OK


def cmd_arrow(args) -> int:
    dec = arrow_graph(read_graph(args.graph), PairParams(args.r, args.ell), args.budget, args.engine)
    out = {"schema_version": 1, "is_ramsey": dec.is_ramsey, "nodes": dec.nodes, "status": dec.status.value}
    if dec.witness is not None:
        out["witness"] = dec.witness.as_triples()
    _emit(out)
    return EXIT_BUDGET if dec.status is Status.BUDGET_EXCEEDED else EXIT_OK


def cmd_crit(args) -> int:
    pp = PairParams(args.r, args.ell)
    G = read_graph(args.graph)
    dec = arrow_graph(G, pp, args.budget, args.engine)
    if dec.status is Status.BUDGET_EXCEEDED:
        _emit({"schema_version": 1, "status": dec.status.value}, args.out)
        return EXIT_BUDGET
    if not dec.is_ramsey:
        print("graph does not arrow; no critical sub-hypergraph", file=sys.stderr)
        return EXIT_LEMMA
    H = find_crit(G, pp, args.budget, args.seed, args.engine)
    _emit(hypergraph_to_json(H), args.out)
    return EXIT_OK


def cmd_hypertree(args) -> int:
    pp = PairParams(args.r, args.ell)
    H = hypergraph_from_json(_load_json(args.crit))
    trace = hypertree_run(H, pp, mode=RestrictionMode(args.mode), n=args.n)
    _emit(trace.to_json(), args.out)
    return EXIT_OK


def cmd_mc(args) -> int:
    cfg = McConfig(
        n=args.n, r=args.r, ell=args.ell,
        c_grid=_floats(args.c_grid) if args.c_grid else None,
        p_grid=_floats(args.p_grid) if args.p_grid else None,
        trials=args.trials, master_seed=args.seed, budget=args.budget, workers=args.workers,
    )
    report = mc_threshold(cfg)
    if args.out:
        Path(args.out).write_text(report.to_csv())
    _emit(report.to_json(), args.json)
    return EXIT_BUDGET if report.budget_incomplete else EXIT_OK


def load_corpus(directory) -> list[CorpusItem]:
    """*.json hypergraph dumps count as critical hypergraphs (and are also traced),
    anything else is read as an edge-list graph."""
    items = []
    for path in sorted(Path(directory).iterdir()):
        if not path.is_file():
            continue
        if path.suffix == ".json":
            items.append(CorpusItem(path.name, "critical", hypergraph_from_json(_load_json(path))))
        else:
            items.append(CorpusItem(path.name, "graph", read_graph(path)))
    return items


def cmd_verify(args) -> int:
    pp = PairParams(args.r, args.ell)
    report = verify_lemmas(load_corpus(args.corpus), pp)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.ok else EXIT_LEMMA


def cmd_out_collect(args) -> int:
    pp = PairParams(args.r, args.ell)
    inputs = [hypergraph_from_json(_load_json(p)) for p in sorted(Path(args.inputs).glob("*.json"))]
    coll = collect_out(inputs, pp, args.n, RestrictionMode(args.mode))
    _emit(coll.to_json(), args.out)
    return EXIT_OK


def cmd_bound_report(args) -> int:
    _emit(union_bound_report(PairParams(args.r, args.ell), args.n))
    return EXIT_OK


# parser ---------------------------------------------------------------

def _pair(p) -> None:
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--ell", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcramsey", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("densities", help="m2 values, epsilon and optionally lambda of a graph")
    _pair(p)
    p.add_argument("--graph")
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("enum", help="count clique and cycle hyperedges")
    _pair(p)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_enum)

    for name, func, helptext in (("arrow", cmd_arrow, "decide G -> (K_r, C_ell)"),
                                 ("crit", cmd_crit, "extract a critical sub-hypergraph")):
        p = sub.add_parser(name, help=helptext)
        _pair(p)
        p.add_argument("--graph", required=True)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--engine", default="compiled", choices=("compiled", "static", "python"))
        if name == "crit":
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("hypertree", help="run HyperTree on a critical hypergraph dump")
    _pair(p)
    p.add_argument("--crit", required=True)
    p.add_argument("--mode", default="single", choices=[m.value for m in RestrictionMode])
    p.add_argument("--n", type=int, default=None, help="host size for the step budget")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hypertree)

    p = sub.add_parser("mc", help="Monte Carlo Ramsey frequencies on G(n,p)")
    _pair(p)
    p.add_argument("--n", type=int, required=True)
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--c-grid", help="comma separated c with p = c n^(-1/m2)")
    grid.add_argument("--p-grid", help="comma separated p")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV output")
    p.add_argument("--json", help="JSON output (stdout if omitted)")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("verify", help="check lemma invariants over a corpus directory")
    _pair(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("out-collect", help="fingerprints of critical hypergraphs up to isomorphism")
    _pair(p)
    p.add_argument("--inputs", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", default="single", choices=[m.value for m in RestrictionMode])
    p.add_argument("--out")
    p.set_defaults(func=cmd_out_collect)

    p = sub.add_parser("bound-report", help="evaluate the union bound at n")
    _pair(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bound_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
