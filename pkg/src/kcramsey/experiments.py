"""Monte Carlo runs on G(n,p), lemma checks over corpora, fingerprint collection.

Randomness: each trial draws from its own Philox stream keyed by
(master_seed, grid index, trial index), so a report does not depend on the
number of workers or the order in which trials finish.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from .densities import PairParams, beta, epsilon, lam
from .graph import Graph, canonical_code
from .hypergraph import Hypergraph, underlying_graph
from .hypertree import (HyperTreeTrace, LemmaViolation, RestrictionMode, audit_trace, check_trace,
                        hypertree_batch, hypertree_run)
from .solver import (Status, arrow_graph, critical_structure, find_crit, is_star_critical,
                     ramsey_crit_full_check)

SCHEMA_VERSION = 1
CSV_HEADER = ["p", "ramsey", "not_ramsey", "budget_exceeded", "lo", "hi"]


# sampling -------------------------------------------------------------

def trial_stream(master_seed: int, point: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial."""
    ss = np.random.SeedSequence([master_seed & (2**64 - 1), point, trial])
    return np.random.Generator(np.random.Philox(ss))


def sample_gnp(n: int, p: Union[float, Fraction], stream: np.random.Generator) -> Graph:
    """G(n, p): every pair independently, drawn in colex pair order."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p} outside [0, 1]")
    draws = stream.random(n * (n - 1) // 2)
    adj = [0] * n
    k = 0
    for v in range(n):
        for u in range(v):
            if draws[k] < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            k += 1
    return Graph(n, adj)


# Monte Carlo ----------------------------------------------------------

@dataclass
class McConfig:
    n: int
    r: int = 4
    ell: int = 4
    p_grid: Optional[list] = None
    c_grid: Optional[list] = None
    trials: int = 100
    master_seed: int = 0
    budget: int = 10**7
    workers: int = 1
    processes: bool = False
    confidence: float = 0.95

    def __post_init__(self):
        if (self.p_grid is None) == (self.c_grid is None):
            raise ValueError("give exactly one of p_grid and c_grid")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for p in self.probabilities():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")

    @property
    def pp(self) -> PairParams:
        return PairParams(self.r, self.ell)

    def exponent(self) -> Fraction:
        """1/m2(K_r, C_ell)."""
        return 1 / self.pp.m2_pair

    def probabilities(self) -> list[float]:
        if self.p_grid is not None:
            return [float(p) for p in self.p_grid]
        e = float(self.exponent())
        return [float(c) * self.n ** (-e) for c in self.c_grid]


@dataclass
class McPoint:
    p: float
    c: Optional[float]
    ramsey: int
    not_ramsey: int
    budget_exceeded: int
    lo: float
    hi: float

    @property
    def decided(self) -> int:
        return self.ramsey + self.not_ramsey

    @property
    def frequency(self) -> float:
        return self.ramsey / self.decided if self.decided else float("nan")


@dataclass
class McReport:
    config: McConfig
    points: list[McPoint]

    @property
    def budget_incomplete(self) -> bool:
        return any(pt.budget_exceeded for pt in self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for pt in self.points:
            w.writerow([repr(pt.p), pt.ramsey, pt.not_ramsey, pt.budget_exceeded, repr(pt.lo), repr(pt.hi)])
        return buf.getvalue()

    def to_json(self) -> dict:
        # worker settings are left out so reports match across thread counts
        config = {k: v for k, v in asdict(self.config).items() if k not in ("workers", "processes")}
        return {"schema_version": SCHEMA_VERSION, "config": config,
                "points": [asdict(pt) for pt in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "McReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')}")
        return cls(McConfig(**data["config"]), [McPoint(**pt) for pt in data["points"]])


def parse_csv(text: str) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    out = []
    for row in rows[1:]:
        p, ra, nr, be, lo, hi = row
        out.append({"p": float(p), "ramsey": int(ra), "not_ramsey": int(nr),
                    "budget_exceeded": int(be), "lo": float(lo), "hi": float(hi)})
    return out


def wilson(successes: int, total: int, confidence: float = 0.95) -> tuple[float, float]:
    if total == 0:
        return 0.0, 1.0
    lo, hi = proportion_confint(successes, total, alpha=1 - confidence, method="wilson")
    # the endpoints are exact at 0 and at total; drop rounding noise there
    lo = 0.0 if successes == 0 else float(lo)
    hi = 1.0 if successes == total else float(hi)
    return lo, hi


def _trial(args) -> int:
    """0 = not Ramsey, 1 = Ramsey, 2 = budget exceeded."""
    n, r, ell, p, seed, point, trial, budget = args
    G = sample_gnp(n, p, trial_stream(seed, point, trial))
    dec = arrow_graph(G, PairParams(r, ell), budget)
    if dec.status is Status.BUDGET_EXCEEDED:
        return 2
    return 1 if dec.is_ramsey else 0


def mc_threshold(cfg: McConfig) -> McReport:
    probs = cfg.probabilities()
    jobs = [(cfg.n, cfg.r, cfg.ell, p, cfg.master_seed, k, t, cfg.budget)
            for k, p in enumerate(probs) for t in range(cfg.trials)]
    if cfg.workers <= 1:
        results = [_trial(j) for j in jobs]
    else:
        pool_cls = ProcessPoolExecutor if cfg.processes else ThreadPoolExecutor
        with pool_cls(max_workers=cfg.workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    points = []
    for k, p in enumerate(probs):
        chunk = results[k * cfg.trials:(k + 1) * cfg.trials]
        ra, nr, be = chunk.count(1), chunk.count(0), chunk.count(2)
        lo, hi = wilson(ra, ra + nr, cfg.confidence)
        c = float(cfg.c_grid[k]) if cfg.c_grid is not None else None
        points.append(McPoint(p, c, ra, nr, be, lo, hi))
    return McReport(cfg, points)


def monotone_up_to_overlap(report: McReport) -> bool:
    """Frequencies nondecreasing in p, except where Wilson intervals overlap."""
    pts = sorted(report.points, key=lambda pt: pt.p)
    for a, b in zip(pts, pts[1:]):
        if a.decided and b.decided and b.frequency < a.frequency and b.hi < a.lo:
            return False
    return True


# lemma verification ---------------------------------------------------

@dataclass
class CorpusItem:
    """A corpus entry and what it claims to be: "critical", "trace" or "graph"."""

    name: str
    tag: str
    payload: object


@dataclass
class LemmaRow:
    item: str
    lemma: str
    ok: bool
    counterexample: Optional[str] = None


@dataclass
class LemmaReport:
    rows: list[LemmaRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list[LemmaRow]:
        return [r for r in self.rows if not r.ok]

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "ok": self.ok, "rows": [asdict(r) for r in self.rows]}


def _critical_rows(name: str, H: Hypergraph, pp: PairParams, trace: bool) -> list[LemmaRow]:
    rows = []
    cert = is_star_critical(H)
    rows.append(LemmaRow(name, "star-critical", cert.ok, None if cert.ok else repr(cert)))
    if cert.ok and trace and pp.paper_regime:
        try:
            rows.extend(_trace_rows(name, hypertree_run(H, pp, check=False)))
        except LemmaViolation as exc:
            rows.append(LemmaRow(name, "hypertreeBasics", False, str(exc)))
    full = ramsey_crit_full_check(H)
    rows.append(LemmaRow(name, "ramsey-crit", full, None if full else "a hyperedge vertex is not privately met"))
    G = underlying_graph(H)
    low = [v for v in G.vertices() if G.degree(v) < pp.r]
    rows.append(LemmaRow(name, "degr", not low, f"vertices of degree < r: {low}" if low else None))
    if low:
        rows.append(LemmaRow(name, "inde-critic", False, "partition undefined: degree below r"))
        value = lam(G, pp)
        ok = value <= -epsilon(pp)
    else:
        rep = critical_structure(H, pp)
        ok = rep.A_independent and rep.min_dB >= pp.r - 2
        rows.append(LemmaRow(name, "inde-critic", ok,
                             None if ok else f"A independent: {rep.A_independent}, min d_B = {rep.min_dB}"))
        value = rep.lam
        ok = value <= -rep.eps
    rows.append(LemmaRow(name, "dens-critic", ok, None if ok else f"lambda = {value}"))
    return rows


def _trace_rows(name: str, trace: HyperTreeTrace) -> list[LemmaRow]:
    basics = check_trace(trace)
    audits = audit_trace(trace)
    deg = [f for f in basics if f.startswith("deg-lambda")]
    rest = [f for f in basics if not f.startswith("deg-lambda")]
    return [
        LemmaRow(name, "hypertreeBasics", not rest, "; ".join(rest) or None),
        LemmaRow(name, "deg-lambda", not deg and not audits, "; ".join(deg + audits) or None),
    ]


def _graph_rows(name: str, J: Graph, pp: PairParams) -> list[LemmaRow]:
    v, e = J.num_vertices(), J.num_edges()
    if v < 2 or v > pp.r or e == pp.r * (pp.r - 1) // 2:
        return [LemmaRow(name, "claim:beta", True, "not applicable")]
    b = beta(J, pp)
    return [LemmaRow(name, "claim:beta", b < 0, None if b < 0 else f"beta = {b}")]


def verify_lemmas(corpus: Sequence[CorpusItem], pp: PairParams, trace_critical: bool = True) -> LemmaReport:
    """One row per (item, lemma); failures carry a counterexample description.

    With ``trace_critical`` every *-critical item is also run through HyperTree
    and its trace checked.
    """
    report = LemmaReport()
    for item in corpus:
        if item.tag == "critical":
            report.rows.extend(_critical_rows(item.name, item.payload, pp, trace_critical))
        elif item.tag == "trace":
            report.rows.extend(_trace_rows(item.name, item.payload))
        elif item.tag == "graph":
            report.rows.extend(_graph_rows(item.name, item.payload, pp))
        else:
            raise ValueError(f"unknown corpus tag {item.tag!r}")
    return report


# fingerprint collection -----------------------------------------------

@dataclass
class OutCollection:
    n: int
    representatives: dict = field(default_factory=dict)  # canonical code -> Graph
    provenance: list = field(default_factory=list)  # (input index, code hex, class tag)

    def __len__(self) -> int:
        return len(self.representatives)

    @property
    def log2n(self) -> float:
        return math.log2(self.n)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "size": len(self),
            "log2_n": self.log2n,
            "fingerprints": [{"canonical_code": code.hex(), "n": G.n, "edges": [list(e) for e in G.edges()]}
                             for code, G in self.representatives.items()],
            "provenance": [list(p) for p in self.provenance],
        }


def collect_out(inputs: Sequence[Hypergraph], pp: PairParams, n: int,
                mode: RestrictionMode = RestrictionMode.SINGLE) -> OutCollection:
    """Run HyperTree on every input and keep fingerprints up to isomorphism."""
    out = OutCollection(n)
    if not inputs:
        return out
    if RestrictionMode(mode) is RestrictionMode.BATCH:
        traces = hypertree_batch(inputs, pp, n)
    else:
        traces = [hypertree_run(H, pp, n=n) for H in inputs]
    for k, tr in enumerate(traces):
        code = canonical_code(tr.fingerprint)
        out.representatives.setdefault(code, tr.fingerprint)
        out.provenance.append((k, code.hex(), tr.fingerprint_class.tag.value))
    return out


# union bound ----------------------------------------------------------

def union_bound_report(pp: PairParams, n: int, out_size: Optional[int] = None,
                       M: Optional[Fraction] = None, eps: Optional[Fraction] = None) -> dict:
    """(log2 n)^M * (n^-eps + n^-M) with M = lambda(K_r), eps = epsilon(r, ell) by default."""
    if n < 2:
        raise ValueError("n must be at least 2")
    M = pp.lambda_clique if M is None else Fraction(M)
    eps = epsilon(pp) if eps is None else Fraction(eps)
    logn = math.log2(n)
    f_count = logn ** float(M)
    f_j1 = n ** (-float(eps))
    f_j2 = n ** (-float(M))
    return {
        "schema_version": SCHEMA_VERSION,
        "r": pp.r,
        "ell": pp.ell,
        "n": n,
        "M": str(M),
        "epsilon": str(eps),
        "c": 2.0 ** (-2 * float(M)),
        "log2_n": logn,
        "count_factor": f_count,
        "j1_term": f_j1,
        "j2_term": f_j2,
        "bound": f_count * (f_j1 + f_j2),
        "observed_out_size": out_size,
    }


# perturbed inputs -----------------------------------------------------

def perturb_host(G: Graph, extra_vertices: int, stream: np.random.Generator,
                 min_deg: int = 2, max_deg: int = 5) -> Graph:
    """G plus new vertices, each joined to a random set of earlier vertices.

    Ramsey-ness is monotone under adding vertices and edges, so a Ramsey G
    stays Ramsey.
    """
    n = G.n + extra_vertices
    edges = list(G.edges())
    for w in range(G.n, n):
        d = int(stream.integers(min_deg, max_deg + 1))
        nbrs = stream.choice(w, size=min(d, w), replace=False)
        edges.extend((int(u), w) for u in sorted(nbrs))
    return Graph.from_edges(n, edges)


def perturbed_critical_inputs(G: Graph, pp: PairParams, count: int, master_seed: int = 0,
                              budget: int = 10**9) -> list[tuple[Graph, Hypergraph]]:
    """(host, find_crit(host)) for `count` random one-to-three-vertex extensions of G."""
    out = []
    for k in range(count):
        stream = trial_stream(master_seed, 0, k)
        host = perturb_host(G, 1 + k % 3, stream)
        H = find_crit(host, pp, budget, seed=k)
        if H is None:
            raise RuntimeError(f"perturbed host {k} does not arrow")
        out.append((host, H))
    return out
