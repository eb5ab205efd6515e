"""Monte Carlo Ramsey frequencies on G(n, p) along a c-grid, p = c n^(-1/m2)."""

import argparse
import json
import sys
import time
from pathlib import Path

from kcramsey.experiments import McConfig, mc_threshold, monotone_up_to_overlap


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[12])
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--ell", type=int, default=4)
    ap.add_argument("--c-grid", type=float, nargs="+", default=[0, 0.25, 0.5, 1, 2])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--budget", type=int, default=10**8)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="results/mc")
    args = ap.parse_args(argv)

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    incomplete = False
    for n in args.n:
        cfg = McConfig(n=n, r=args.r, ell=args.ell, c_grid=args.c_grid, trials=args.trials,
                       master_seed=args.seed, budget=args.budget, workers=args.workers)
        t = time.perf_counter()
        rep = mc_threshold(cfg)
        stem = out / f"mc_r{args.r}_l{args.ell}_n{n}"
        stem.with_suffix(".csv").write_text(rep.to_csv())
        stem.with_suffix(".json").write_text(json.dumps(rep.to_json(), indent=1))
        print(f"n={n} ({time.perf_counter() - t:.1f}s) monotone={monotone_up_to_overlap(rep)}")
        for pt in rep.points:
            print(f"  c={pt.c:<5} p={pt.p:.4f} ramsey={pt.ramsey}/{pt.decided} "
                  f"budget_exceeded={pt.budget_exceeded} wilson=[{pt.lo:.3f}, {pt.hi:.3f}]")
        incomplete |= rep.budget_incomplete
    return 3 if incomplete else 0


if __name__ == "__main__":
    sys.exit(main())
