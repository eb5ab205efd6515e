"""HyperTree and Flower: growing a fingerprint inside a *-critical hypergraph.

A run starts from one clique hyperedge and, while lambda of the current
underlying graph stays above -epsilon and the step budget ceil(log2 n) is not
used up, attaches either a clique that meets the current graph in at least
two vertices without lying inside it, or a flower (one cycle hyperedge plus
clique petals, each meeting the cycle in a single hypervertex).

Every "pick some" is resolved by the smallest candidate: hyperedges compare
by their sorted edge keys, where an edge labelled by sigma has key
(0, label) and an unlabelled edge has key (1, edge id).

The edge labelling sigma grows with the graph; new edges are ordered by an
anchored canonical form of the new-edge graph, so the labels a step assigns
depend only on the shape of the attachment and on where it meets the
current graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from .densities import PairParams, beta, epsilon, lam
from .graph import (EdgeLabelling, Graph, GraphError, PreconditionError, anchored_canonical_order,
                    canonical_code, edge_from_id, edge_id, popcount, subgraph_intersection, subgraph_union)
from .hypergraph import Hyperedge, Hypergraph, Kind, underlying_graph
from .solver import is_star_critical


class LemmaViolation(RuntimeError):
    """An internal contract that a lemma guarantees on valid input failed."""

    def __init__(self, lemma: str, detail: str):
        super().__init__(f"{lemma}: {detail}")
        self.lemma = lemma
        self.detail = detail


class StepKind(str, Enum):
    INIT = "Init"
    CLIQUE = "CliqueAttach"
    FLOWER = "FlowerAttach"


class StopReason(str, Enum):
    LAMBDA = "LambdaReached"
    BUDGET = "StepBudget"


class RestrictionMode(str, Enum):
    SINGLE = "single"
    BATCH = "batch"


class FingerprintTag(str, Enum):
    J1 = "J1"
    J2 = "J2"
    UNCLASSIFIED = "Unclassified"


def step_budget(n: int) -> int:
    """ceil(log2 n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n - 1).bit_length()


# ordering -------------------------------------------------------------

def _edge_key(e: int, sigma: Optional[EdgeLabelling]):
    if sigma is not None and e in sigma:
        return (0, sigma[e])
    return (1, e)


def hyperedge_key(E: Hyperedge, sigma: Optional[EdgeLabelling] = None):
    return (int(E.kind), tuple(sorted(_edge_key(e, sigma) for e in E.edges)))


def _smallest(cands: Iterable[Hyperedge], sigma: Optional[EdgeLabelling]) -> Optional[Hyperedge]:
    return min(cands, key=lambda E: hyperedge_key(E, sigma), default=None)


# labellings -----------------------------------------------------------

def initial_labelling(E0: Hyperedge) -> EdgeLabelling:
    """The fixed labelling of K_r: vertices in increasing order, edges lexicographically."""
    pairs = sorted(E0.pairs())
    return EdgeLabelling({edge_id(u, v): k + 1 for k, (u, v) in enumerate(pairs)})


def _anchor_key(v: int, G_prev: Graph, sigma: EdgeLabelling):
    return tuple(sorted(sigma[edge_id(v, w)] for w in G_prev.neighbours(v)))


def extend_labelling(sigma_prev: EdgeLabelling, G_prev: Graph, G_new: Graph) -> EdgeLabelling:
    """Canonical extension of sigma_prev from E(G_prev) to E(G_new).

    Old labels are kept, new edges get e(G_prev)+1, ..., e(G_new), and their
    order depends only on the new-edge graph with its vertices in G_prev
    individualised, in the order of their incident old labels.
    """
    old = G_prev.edge_ids()
    if sigma_prev.edges() != old:
        raise GraphError("sigma_prev must label exactly the edges of G_prev")
    new_all = G_new.edge_ids()
    if not old <= new_all:
        raise GraphError("G_prev must be a subgraph of G_new")
    new = new_all - old
    if not new:
        return sigma_prev
    N = Graph.from_edge_ids(G_new.n, new)
    prev_mask = G_prev.vmask
    anchors = [v for v in N.vertices() if (prev_mask >> v) & 1]
    anchors.sort(key=lambda v: _anchor_key(v, G_prev, sigma_prev))
    order = anchored_canonical_order(N, anchors)
    pos = {v: i for i, v in enumerate(order)}

    def key(e):
        u, v = edge_from_id(e)
        a, b = sorted((pos[u], pos[v]))
        return (a, b)

    labels = sigma_prev.as_dict()
    base = len(labels)
    for k, e in enumerate(sorted(new, key=key)):
        labels[e] = base + k + 1
    return EdgeLabelling(labels)


# flowers --------------------------------------------------------------

@dataclass(frozen=True)
class Flower:
    cycle: Hyperedge
    petals: tuple[tuple[int, Hyperedge], ...]  # (cycle edge id, petal), by edge id
    seed: int

    def __post_init__(self):
        if self.cycle.kind is not Kind.CYCLE:
            raise GraphError("flower cycle must be a cycle hyperedge")
        for e, P in self.petals:
            if P.kind is not Kind.CLIQUE or P.edge_set & self.cycle.edge_set != {e}:
                raise GraphError(f"petal for edge {edge_from_id(e)} must meet the cycle exactly there")
        if len(self.petals) >= len(self.cycle.edges):
            raise GraphError("a flower has fewer petals than the cycle length")

    @property
    def petal_map(self) -> dict[int, Hyperedge]:
        return dict(self.petals)

    def hyperedges(self) -> list[Hyperedge]:
        return [self.cycle] + [P for _, P in self.petals]


def restricted_hypergraph(H_prev: Hypergraph, inputs: Sequence[Hypergraph],
                          mode: RestrictionMode = RestrictionMode.SINGLE) -> Hypergraph:
    """Hyperedges of the inputs lying inside the hypervertex set of H_prev.

    SINGLE takes exactly one input; BATCH takes the union over all inputs,
    which under-approximates the union over every critical hypergraph that
    reaches H_prev.
    """
    inputs = list(inputs)
    if not inputs:
        raise ValueError("restricted_hypergraph needs at least one input")
    mode = RestrictionMode(mode)
    if mode is RestrictionMode.SINGLE and len(inputs) != 1:
        raise ValueError("single mode takes exactly one input")
    inside = set(H_prev.hypervertices)
    hes = set()
    for H in inputs:
        hes.update(E for E in H.hyperedges if E.edge_set <= inside)
    return Hypergraph(inputs[0].host, hes, check=False)


def flower_run(H_prev: Hypergraph, H: Hypergraph, sigma: EdgeLabelling,
               mode: RestrictionMode = RestrictionMode.SINGLE,
               restriction: Optional[Hypergraph] = None) -> Flower:
    """Seed, cycle and petals; raises LemmaViolation when one does not exist.

    ``restriction`` overrides the restricted hypergraph (batch runs pass the
    union over their group); otherwise it is computed from H alone.
    """
    if restriction is None:
        restriction = restricted_hypergraph(H_prev, [H], mode)
    inside = set(H_prev.hypervertices)
    if sigma.edges() != inside:
        raise GraphError("sigma must label exactly the hypervertices of H_prev")
    covered = set()
    for C in restriction.cycles():
        covered.update(C.edges)
    e0 = next((e for e in sigma.in_order() if e not in covered), None)
    if e0 is None:
        raise LemmaViolation("existenceofe0", "every edge of the current graph lies in a restricted cycle")
    C = _smallest((C for C in H.cycles() if e0 in C.edge_set and not C.edge_set <= inside), sigma)
    if C is None:
        raise LemmaViolation("existenceofe0", f"no cycle hyperedge through seed {edge_from_id(e0)} leaves the current graph")
    petals = []
    for e in C.edges:
        if e in inside:
            continue
        P = _smallest((P for P in H.cliques() if P.edge_set & C.edge_set == {e}), sigma)
        if P is None:
            raise LemmaViolation("existenceofe0", f"no petal meets the cycle exactly in {edge_from_id(e)}")
        petals.append((e, P))
    flower = Flower(C, tuple(petals), e0)
    _check_flower(flower, H_prev)
    return flower


def _check_flower(F: Flower, H_prev: Hypergraph) -> None:
    inside = set(H_prev.hypervertices)
    vmask = underlying_graph(H_prev).vmask
    if F.cycle.edge_set <= inside:
        raise LemmaViolation("preludeflowerCorrectness F1", "cycle lies inside the current hypergraph")
    for e, P in F.petals:
        if P.edge_set & F.cycle.edge_set != {e}:
            raise LemmaViolation("preludeflowerCorrectness F2", f"petal for {edge_from_id(e)} meets the cycle elsewhere")
        if popcount(P.vertex_mask() & vmask) > 1:
            raise LemmaViolation("preludeflowerCorrectness F3", f"petal for {edge_from_id(e)} meets the current graph in two vertices")
    if not F.cycle.edge_set & inside:
        raise LemmaViolation("preludeflowerCorrectness F3", "cycle shares no edge with the current graph")


# traces ---------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    i: int
    kind: StepKind
    H: Hypergraph
    D: frozenset
    sigma: EdgeLabelling
    lam: Fraction
    new_vertices: int
    added: tuple[Hyperedge, ...]
    flower: Optional[Flower] = None

    @property
    def graph(self) -> Graph:
        return underlying_graph(self.H)

    @property
    def degenerate(self) -> bool:
        return self.i in self.D


@dataclass(frozen=True)
class FingerprintClass:
    tag: FingerprintTag
    epsilon: Fraction
    M: Fraction
    edge_count: int
    lam: Fraction


def classify_fingerprint(Gf: Graph, pp: PairParams, n: int) -> FingerprintClass:
    """J1: lambda <= -eps.  J2: lambda <= M = lambda(K_r) and e >= log2 n."""
    eps = epsilon(pp)
    M = pp.lambda_clique
    value = lam(Gf, pp)
    e = Gf.num_edges()
    if value <= -eps:
        tag = FingerprintTag.J1
    elif value <= M and (1 << e) >= n:
        tag = FingerprintTag.J2
    else:
        tag = FingerprintTag.UNCLASSIFIED
    return FingerprintClass(tag, eps, M, e, value)


@dataclass
class HyperTreeTrace:
    steps: list[Step]
    stop_reason: StopReason
    n: int
    budget: int
    pp: PairParams
    fingerprint: Graph = field(repr=False)
    fingerprint_class: FingerprintClass

    @property
    def T(self) -> int:
        return len(self.steps) - 1

    @property
    def H_T(self) -> Hypergraph:
        return self.steps[-1].H

    @property
    def D_T(self) -> frozenset:
        return self.steps[-1].D

    @property
    def lambdas(self) -> list[Fraction]:
        return [s.lam for s in self.steps]

    def decreases(self) -> dict[int, Fraction]:
        lams = self.lambdas
        return {i: lams[i - 1] - lams[i] for i in range(1, len(lams))}

    @property
    def delta_obs(self) -> Optional[Fraction]:
        """Smallest lambda decrease over degenerate steps (None if there are none)."""
        dec = self.decreases()
        vals = [dec[i] for i in self.D_T]
        return min(vals) if vals else None

    def degenerate_bound(self) -> Optional[Fraction]:
        """1 + (lambda(K_r) + eps)/delta_obs."""
        d = self.delta_obs
        if d is None or d <= 0:
            return None
        return 1 + (self.pp.lambda_clique + epsilon(self.pp)) / d

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "r": self.pp.r,
            "ell": self.pp.ell,
            "n": self.n,
            "budget": self.budget,
            "steps": [{
                "i": s.i,
                "kind": s.kind.value,
                "new_vertices": s.new_vertices,
                "lambda": {"num": s.lam.numerator, "den": s.lam.denominator},
                "degenerate": s.degenerate,
                "added": [{"kind": E.kind.label, "edges": [list(p) for p in E.pairs()]} for E in s.added],
                "sigma": [[*edge_from_id(e), s.sigma[e]] for e in s.sigma.in_order()],
            } for s in self.steps],
            "D_T": sorted(self.D_T),
            "stop_reason": self.stop_reason.value,
            "fingerprint": {
                "n": self.fingerprint.n,
                "edges": [list(e) for e in self.fingerprint.edges()],
                "canonical_code": canonical_code(self.fingerprint).hex(),
            },
            "class": self.fingerprint_class.tag.value,
        }


class _Run:
    """Mutable state of one HyperTree execution."""

    def __init__(self, H: Hypergraph, pp: PairParams, n: int):
        cliques = H.cliques()
        if not cliques:
            raise PreconditionError("input has no clique hyperedge")
        self.H = H
        self.pp = pp
        self.n = n
        self.budget = step_budget(n)
        self.eps = epsilon(pp)
        E0 = _smallest(cliques, None)
        H0 = Hypergraph(H.host, [E0], check=False)
        sigma0 = initial_labelling(E0)
        G0 = underlying_graph(H0)
        self.steps = [Step(0, StepKind.INIT, H0, frozenset(), sigma0, lam(G0, pp), G0.num_vertices(), (E0,))]
        self.G = G0

    @property
    def active(self) -> bool:
        i = len(self.steps)
        return self.steps[-1].lam > -self.eps and i - 1 < self.budget

    def clique_candidate(self) -> Optional[Hyperedge]:
        cur = self.steps[-1]
        inside = set(cur.H.hypervertices)
        vmask = self.G.vmask
        return _smallest((E for E in self.H.cliques()
                          if popcount(E.vertex_mask() & vmask) >= 2 and not E.edge_set <= inside), cur.sigma)

    def attach(self, kind: StepKind, added: Sequence[Hyperedge], flower: Optional[Flower] = None) -> None:
        prev = self.steps[-1]
        i = len(self.steps)
        H_new = Hypergraph(self.H.host, list(prev.H.hyperedges) + list(added), check=False)
        G_new = underlying_graph(H_new)
        new_vertices = popcount(G_new.vmask & ~self.G.vmask)
        if kind is StepKind.CLIQUE or new_vertices != self.pp.perfect_flower_growth:
            D = prev.D | {i}
        else:
            D = prev.D
        sigma = extend_labelling(prev.sigma, self.G, G_new)
        self.steps.append(Step(i, kind, H_new, D, sigma, lam(G_new, self.pp), new_vertices, tuple(added), flower))
        self.G = G_new

    def finish(self) -> HyperTreeTrace:
        last = self.steps[-1]
        reason = StopReason.LAMBDA if last.lam <= -self.eps else StopReason.BUDGET
        Gf = self.G
        cls = classify_fingerprint(Gf, self.pp, self.n)
        return HyperTreeTrace(self.steps, reason, self.n, self.budget, self.pp, Gf, cls)


def hypertree_run(H: Hypergraph, pp: PairParams, mode: RestrictionMode = RestrictionMode.SINGLE,
                  n: Optional[int] = None, check: bool = True) -> HyperTreeTrace:
    """Run HyperTree on one *-critical hypergraph.

    ``n`` defaults to the host vertex count.  With ``check`` the input is
    tested for *-criticality first.
    """
    if RestrictionMode(mode) is RestrictionMode.BATCH:
        return hypertree_batch([H], pp, n, check)[0]
    _require_input(H, pp, check)
    run = _Run(H, pp, n if n is not None else H.host.n)
    while run.active:
        _advance(run, None)
    return run.finish()


def hypertree_batch(inputs: Sequence[Hypergraph], pp: PairParams, n: Optional[int] = None,
                    check: bool = True) -> list[HyperTreeTrace]:
    """Run HyperTree on several inputs in lockstep.

    At each step, runs that enter Flower with the same current hypergraph
    and labelling share one restricted hypergraph: the union of their
    individual restrictions.
    """
    for H in inputs:
        _require_input(H, pp, check)
    runs = [_Run(H, pp, n if n is not None else H.host.n) for H in inputs]
    while True:
        live = [r for r in runs if r.active]
        if not live:
            break
        flowering: dict = {}
        for r in live:
            if r.clique_candidate() is None:
                cur = r.steps[-1]
                flowering.setdefault((cur.H.as_set(), cur.sigma), []).append(r)
        shared = {}
        for key, group in flowering.items():
            R = restricted_hypergraph(group[0].steps[-1].H, [g.H for g in group], RestrictionMode.BATCH)
            for g in group:
                shared[id(g)] = R
        for r in live:
            _advance(r, shared.get(id(r)))
    return [r.finish() for r in runs]


def _require_input(H: Hypergraph, pp: PairParams, check: bool) -> None:
    if not pp.paper_regime:
        raise PreconditionError("HyperTree needs r, ell >= 4")
    if H.host.num_vertices() < 2:
        raise PreconditionError("host needs at least two vertices")
    if check:
        cert = is_star_critical(H)
        if not cert:
            raise PreconditionError(f"input is not *-critical: {cert}")


def _advance(run: _Run, restriction: Optional[Hypergraph]) -> None:
    E = run.clique_candidate()
    if E is not None:
        run.attach(StepKind.CLIQUE, [E])
        return
    cur = run.steps[-1]
    F = flower_run(cur.H, run.H, cur.sigma, RestrictionMode.SINGLE, restriction)
    run.attach(StepKind.FLOWER, F.hyperedges(), F)


# trace checks ---------------------------------------------------------

def check_trace(trace: HyperTreeTrace, H: Optional[Hypergraph] = None) -> list[str]:
    """Basic properties of a trace; returns the failures found (empty = pass).

    Covers: H_0 a single clique; strictly growing hypervertex counts; nested
    D sets inside {1..T}; minimal stopping time; H_T inside the input;
    e(G_i) = v(H_i); lambda constant off D_T and strictly falling on it;
    lambda(G_T) <= lambda(K_r); the degenerate-step count bound; a J1/J2
    fingerprint.
    """
    pp = trace.pp
    eps = epsilon(pp)
    out = []
    s0 = trace.steps[0]
    if len(s0.H) != 1 or s0.H.hyperedges[0].kind is not Kind.CLIQUE:
        out.append("(a) H_0 is not a single clique hyperedge")
    sizes = [s.H.num_hypervertices() for s in trace.steps]
    if any(a >= b for a, b in zip(sizes, sizes[1:])):
        out.append(f"(b) hypervertex counts not strictly increasing: {sizes}")
    T = trace.T
    prevD = frozenset()
    for s in trace.steps:
        if not prevD <= s.D or not s.D <= frozenset(range(1, T + 1)):
            out.append(f"(c) D_{s.i} not nested in D_(i+1) within 1..T")
        prevD = s.D
    lams = trace.lambdas
    for i in range(T):
        if lams[i] <= -eps or i >= trace.budget:
            out.append(f"(c) run should have stopped at step {i}")
            break
    if not (lams[T] <= -eps or T >= trace.budget):
        out.append("(c) run stopped early")
    if (trace.stop_reason is StopReason.LAMBDA) != (lams[T] <= -eps):
        out.append("(d) stop reason disagrees with lambda")
    if H is not None and not trace.H_T.issubset(H):
        out.append("(d) H_T not contained in the input")
    if trace.fingerprint != underlying_graph(trace.H_T):
        out.append("(d) fingerprint is not the underlying graph of H_T")
    for s in trace.steps:
        if s.graph.num_edges() != s.H.num_hypervertices():
            out.append(f"e(G_{s.i}) != v(H_{s.i})")
    for i, d in trace.decreases().items():
        if i in trace.D_T and not d > 0:
            out.append(f"deg-lambda(2): lambda did not fall at degenerate step {i}")
        if i not in trace.D_T and d != 0:
            out.append(f"deg-lambda(1): lambda changed at non-degenerate step {i}")
    if lams[T] > pp.lambda_clique:
        out.append("lambda(G_T) exceeds lambda(K_r)")
    bound = trace.degenerate_bound()
    if bound is not None and len(trace.D_T) > bound:
        out.append(f"|D_T| = {len(trace.D_T)} exceeds 1 + (M + eps)/delta_obs = {bound}")
    if trace.fingerprint_class.tag is FingerprintTag.UNCLASSIFIED:
        out.append("fingerprint is neither J1 nor J2")
    return out


# flower audit ---------------------------------------------------------

@dataclass
class FlowerAudit:
    ok: bool
    failures: list[str]
    petal_order: list[int]  # cycle edge ids m_1, m_2, ... as edge ids
    I_sizes: list[int]
    A0: int
    t: int
    delta: Fraction
    cycle_increment: Fraction

    def __bool__(self):
        return self.ok


def audit_flower_step(prev: Step, step: Step, pp: PairParams) -> FlowerAudit:
    """Recompute a flower step's lambda change through the petal sequence.

    Walk the cycle from an edge it shares with G_{i-1}; repeatedly take the
    first still-open cycle edge, add its petal, and close every open edge
    whose forward endpoint the petal covers.  Each inequality of the chain
    is checked exactly.
    """
    if step.kind is not StepKind.FLOWER or step.flower is None:
        raise ValueError("audit_flower_step needs a FlowerAttach step")
    F = step.flower
    G_prev = prev.graph
    G_new = step.graph
    old = G_prev.edge_ids()
    m2p = pp.m2_pair
    ell = pp.ell
    fails = []

    # cyclic order u_0 .. u_{ell-1} with u_0 u_{ell-1} in G_{i-1}
    shared = [e for e in F.cycle.edges if e in old]
    if not shared:
        raise LemmaViolation("preludeflowerCorrectness F3", "cycle shares no edge with G_{i-1}")
    start = min(shared, key=lambda e: prev.sigma[e])
    a, b = edge_from_id(start)
    Cg = F.cycle.graph(G_new.n)
    order = [a]
    prev_v = b
    while len(order) < ell:
        nxt = [w for w in Cg.neighbours(order[-1]) if w != prev_v]
        prev_v = order[-1]
        order.append(nxt[0])
    if order[-1] != b:
        raise LemmaViolation("deg-lambda", "cycle walk did not close")
    u = order + [order[0]]

    def fwd(m):  # edge u_m u_{m+1}
        return edge_id(u[m], u[m + 1])

    # (dlambdaC)
    J0 = subgraph_intersection(G_prev, Cg)
    A0 = [m for m in range(ell) if fwd(m) not in old]
    inc_C = lam(subgraph_union(G_prev, Cg), pp) - lam(G_prev, pp)
    direct_C = ell - J0.num_vertices() - Fraction(ell - J0.num_edges()) / m2p
    if inc_C != direct_C:
        fails.append("(dlambdaC) increment formula")
    rhs_C = (Fraction(ell - 2, ell - 1) - 1 / m2p) * len(A0)
    if not inc_C <= rhs_C:
        fails.append("(dlambdaC) inequality")
    j0_is_k2 = J0.num_vertices() == 2 and J0.num_edges() == 1
    if (inc_C == rhs_C) != j0_is_k2:
        fails.append("(dlambdaC) equality iff J_0 = K_2")

    # petal sequence
    petal_of = F.petal_map
    A = set(A0)
    cur = subgraph_union(G_prev, Cg)
    seq, I_sizes = [], []
    bk2 = 1 / m2p - Fraction(ell - 2, ell - 1)
    total = inc_C
    while A:
        ms = min(A)
        P = petal_of.get(fwd(ms))
        if P is None:
            fails.append(f"no petal for open cycle edge {edge_from_id(fwd(ms))}")
            break
        Pg = P.graph(G_new.n)
        J = subgraph_intersection(cur, Pg)
        I = [m + 1 for m in A if m != ms and (J.vmask >> u[m + 1]) & 1]
        tip = u[ms + 1]
        if J.degree(tip) != 1:
            fails.append(f"Claim deg1: degree of u_{ms + 1} in J_s is {J.degree(tip)}")
        if any(J.degree(u[k]) != 0 for k in I):
            fails.append("Claim deg1: I_s not isolated in J_s")
        b_J = beta(J, pp)
        keep = [v for v in J.vertices() if v not in {u[k] for k in I}]
        Jt = J.induced(keep)
        inc = lam(subgraph_union(cur, Pg), pp) - lam(cur, pp)
        if inc != b_J:
            fails.append("(change1petal) lambda increment != beta(J_s)")
        if b_J != beta(Jt, pp) - len(I):
            fails.append("(change1petal) beta(J_s) != beta(J~_s) - |I_s|")
        if not b_J <= bk2 - len(I):
            fails.append("(change1petal) inequality")
        jt_k2 = Jt.num_vertices() == 2 and Jt.num_edges() == 1
        if (b_J == bk2 - len(I)) != jt_k2:
            fails.append("(change1petal) equality iff J~_s = K_2")
        total += inc
        cur = subgraph_union(cur, Pg)
        seq.append(fwd(ms))
        I_sizes.append(len(I))
        A = {m for m in A if not (Pg.vmask >> u[m + 1]) & 1}
    t = len(seq)
    if sum(k + 1 for k in I_sizes) != len(A0):
        fails.append("sum(|I_s| + 1) != |A_0|")
    delta = step.lam - prev.lam
    if delta != lam(G_new, pp) - lam(G_prev, pp):
        fails.append("recorded lambda disagrees with direct evaluation")
    # (conclusion1.0): remaining petals only lower lambda
    if not delta <= total:
        fails.append("(conclusion1.0) inequality")
    if t == len(F.petals) and delta != total:
        fails.append("(conclusion1.0) equality when the sequence uses every petal")
    c2 = (bk2 + 1) * (t - len(A0))
    if not delta <= c2:
        fails.append("(conclusion2) inequality")
    if not c2 <= 0 or (c2 == 0) != (t == len(A0)):
        fails.append("(conclusion3) sign / equality iff t = |A_0|")
    if not delta <= 0:
        fails.append("flower step raised lambda")
    perfect = step.new_vertices == pp.perfect_flower_growth
    if (delta == 0) != perfect:
        fails.append("lambda unchanged iff (r-1)(ell-1)-1 new vertices")
    return FlowerAudit(not fails, fails, seq, I_sizes, len(A0), t, delta, inc_C)


def audit_clique_step(prev: Step, step: Step, pp: PairParams) -> list[str]:
    """lambda change of a clique step equals beta(G_{i-1} ∩ K) < 0."""
    (K,) = step.added
    Kg = K.graph(step.graph.n)
    J = subgraph_intersection(prev.graph, Kg)
    fails = []
    b = beta(J, pp)
    if step.lam - prev.lam != b:
        fails.append("clique step: lambda change != beta(J)")
    if not b < 0:
        fails.append("claim:beta(a): beta(J) >= 0")
    if J.num_vertices() < 2 or J.num_edges() == comb(pp.r, 2):
        fails.append("clique step: intersection outside 2 <= v(J), J != K_r")
    return fails


def audit_trace(trace: HyperTreeTrace) -> list[str]:
    """Every per-step audit of a trace, as a list of failures."""
    out = []
    for prev, s in zip(trace.steps, trace.steps[1:]):
        if s.kind is StepKind.FLOWER:
            rep = audit_flower_step(prev, s, trace.pp)
            out.extend(f"step {s.i}: {f}" for f in rep.failures)
        else:
            out.extend(f"step {s.i}: {f}" for f in audit_clique_step(prev, s, trace.pp))
    return out


def dump_trace(trace: HyperTreeTrace, path) -> None:
    with open(path, "w") as fh:
        json.dump(trace.to_json(), fh, indent=1)
