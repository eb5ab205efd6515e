"""Fingerprints of critical hypergraphs from perturbed K10 hosts, up to isomorphism.

The collection size is reported next to log2 n; nothing about the asymptotic
bound is claimed.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from kcramsey.densities import PairParams
from kcramsey.experiments import collect_out, perturbed_critical_inputs, union_bound_report
from kcramsey.graph import Graph
from kcramsey.hypergraph import dump_hypergraph
from kcramsey.hypertree import RestrictionMode


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--mode", default="single", choices=[m.value for m in RestrictionMode])
    ap.add_argument("--outdir", default="results/out")
    args = ap.parse_args(argv)

    pp = PairParams(4, 4)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    t = time.perf_counter()
    pairs = perturbed_critical_inputs(Graph.complete(10), pp, args.count, master_seed=args.seed)
    n = max(host.n for host, _ in pairs)
    for k, (_, H) in enumerate(pairs):
        dump_hypergraph(H, out / f"crit_{k:03d}.json")
    coll = collect_out([H for _, H in pairs], pp, n, RestrictionMode(args.mode))
    data = coll.to_json()
    data["bound"] = union_bound_report(pp, n, out_size=len(coll))
    (out / "out_collection.json").write_text(json.dumps(data, indent=1))
    print(f"{len(pairs)} inputs, host sizes up to {n}: {len(coll)} fingerprint classes "
          f"(log2 n = {coll.log2n:.2f}) in {time.perf_counter() - t:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
