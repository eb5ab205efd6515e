"""Arrow decisions for Ramsey hypergraphs, minimisation, and criticality checks.

A colouring c of the hypervertices is a *witness* (the hypergraph does not
arrow) when no clique hyperedge is all colour 1 and no cycle hyperedge is all
colour 2.  The search is DPLL with unit propagation over per-hyperedge
counters.  Two engines share that design: a compiled one (default) with
weighted branching and conflict-directed backjumping, and a plain Python one
with a static order, kept as an independent reference.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import _kernel
from .densities import PairParams, epsilon, lam
from .graph import Graph, PreconditionError, bits, edge_from_id, partition_AB, popcount
from .hypergraph import Hyperedge, Hypergraph, build_hypergraph, underlying_graph

DEFAULT_BUDGET = 10**9


class Status(str, Enum):
    DECIDED = "decided"
    BUDGET_EXCEEDED = "budget_exceeded"


class BudgetExceeded(RuntimeError):
    """The search hit its propagation budget before deciding."""


@dataclass(frozen=True)
class ColoringWitness:
    assignment: dict  # edge id -> 1 | 2

    def as_triples(self) -> list[list[int]]:
        return [[*edge_from_id(e), c] for e, c in sorted(self.assignment.items())]


@dataclass
class ArrowDecision:
    is_ramsey: Optional[bool]
    witness: Optional[ColoringWitness] = None
    status: Status = Status.DECIDED
    nodes: int = 0
    propagations: int = 0
    core: Optional[frozenset] = field(default=None, repr=False)

    @property
    def decided(self) -> bool:
        return self.status is Status.DECIDED


def witness_is_valid(H: Hypergraph, assignment: dict) -> bool:
    """Direct check over all hyperedges, independent of the search."""
    if any(e not in assignment for e in H.hypervertices):
        return False
    for E in H.hyperedges:
        own = int(E.kind)
        if all(assignment[e] == own for e in E.edges):
            return False
    return True


class _Search:
    """One DPLL run; holds mutable trail state, so confine it to one thread."""

    def __init__(self, H: Hypergraph, budget: int, fixed: Optional[dict] = None):
        self.H = H
        self.budget = budget
        self.fixed = fixed or {}
        self.var_of = {e: i for i, e in enumerate(H.hypervertices)}
        self.nv = len(H.hypervertices)
        self.members = [[self.var_of[e] for e in E.edges] for E in H.hyperedges]
        self.typ = [int(E.kind) for E in H.hyperedges]
        self.size = [len(m) for m in self.members]
        self.occ: list[list[int]] = [[] for _ in range(self.nv)]
        for h, mem in enumerate(self.members):
            for v in mem:
                self.occ[v].append(h)
        self.color = [0] * self.nv
        self.own = [0] * len(self.members)
        self.oth = [0] * len(self.members)
        self.trail: list[int] = []
        self.used: set[int] = set()
        self.nodes = 0
        self.props = 0

    def _assign(self, v: int, c: int, why: int) -> int:
        """Assign and propagate; return a conflicting hyperedge index, -2 for a
        clash with a fixed colour, or -1."""
        color, own, oth, typ, size, occ, members = (
            self.color, self.own, self.oth, self.typ, self.size, self.occ, self.members)
        used, trail = self.used, self.trail
        queue = [(v, c, why)]
        while queue:
            v, c, why = queue.pop()
            cv = color[v]
            if cv:
                if cv != c:
                    if why < 0:
                        return -2
                    used.add(why)
                    return why
                continue
            color[v] = c
            trail.append(v)
            if why >= 0:
                used.add(why)
            self.props += 1
            conflict = -1
            for h in occ[v]:
                if typ[h] == c:
                    k = own[h] + 1
                    own[h] = k
                    if oth[h] == 0:
                        if k == size[h]:
                            conflict = h
                        elif k == size[h] - 1 and conflict < 0:
                            for u in members[h]:
                                if not color[u]:
                                    queue.append((u, 3 - c, h))
                                    break
                else:
                    oth[h] += 1
            if conflict >= 0:
                used.add(conflict)
                return conflict
        return -1

    def _undo(self, length: int) -> None:
        color, own, oth, typ, occ, trail = self.color, self.own, self.oth, self.typ, self.occ, self.trail
        while len(trail) > length:
            v = trail.pop()
            c = color[v]
            for h in occ[v]:
                if typ[h] == c:
                    own[h] -= 1
                else:
                    oth[h] -= 1
            color[v] = 0

    def run(self, first_color: int = 2) -> ArrowDecision:
        second = 3 - first_color
        for h, s in enumerate(self.size):
            if s == 0:
                return self._unsat()
        # hyperedges of size one force their vertex at the root
        for h, s in enumerate(self.size):
            if s == 1 and self._assign(self.members[h][0], 3 - self.typ[h], h) != -1:
                return self._unsat()
        for e, c in sorted(self.fixed.items()):
            if e in self.var_of and self._assign(self.var_of[e], c, -1) != -1:
                return self._unsat()
        decisions: list[tuple[int, int, bool]] = []
        nxt = 0
        color = self.color
        while True:
            if self.props > self.budget:
                return ArrowDecision(None, status=Status.BUDGET_EXCEEDED, nodes=self.nodes,
                                     propagations=self.props)
            while nxt < self.nv and color[nxt]:
                nxt += 1
            if nxt == self.nv:
                assignment = {e: color[i] for e, i in self.var_of.items()}
                return ArrowDecision(False, ColoringWitness(assignment), nodes=self.nodes,
                                     propagations=self.props)
            v = nxt
            self.nodes += 1
            decisions.append((len(self.trail), v, False))
            conf = self._assign(v, first_color, -1)
            while conf >= 0:
                while decisions and decisions[-1][2]:
                    self._undo(decisions.pop()[0])
                if not decisions:
                    return self._unsat()
                length, v, _ = decisions.pop()
                self._undo(length)
                decisions.append((length, v, True))
                self.nodes += 1
                conf = self._assign(v, second, -1)
                # every variable below a decision was assigned before it
                nxt = v

    def _unsat(self) -> ArrowDecision:
        core = frozenset(self.H.hyperedges[h] for h in self.used)
        return ArrowDecision(True, None, nodes=self.nodes, propagations=self.props, core=core)


def _encode(H: Hypergraph, fixed: dict):
    var_of = {e: i for i, e in enumerate(H.hypervertices)}
    members = [[var_of[e] for e in E.edges] for E in H.hyperedges]
    kinds = [int(E.kind) for E in H.hyperedges]
    # a fixed colour c on e is a one-element hyperedge of type 3 - c
    for e, c in sorted(fixed.items()):
        if e in var_of:
            members.append([var_of[e]])
            kinds.append(3 - c)
    ptr = np.zeros(len(members) + 1, np.int64)
    ptr[1:] = np.cumsum([len(m) for m in members])
    cl_var = np.fromiter((v for m in members for v in m), np.int64, int(ptr[-1]))
    cl_typ = np.array(kinds, np.int8)
    return len(var_of), ptr, cl_var, cl_typ


def _compiled(H: Hypergraph, budget: int, heuristic: int, fixed: dict) -> ArrowDecision:
    nv, ptr, cl_var, cl_typ = _encode(H, fixed)
    res, color, core, nodes, props = _kernel.dpll(nv, ptr, cl_var, cl_typ, budget, 2, heuristic)
    if res == _kernel.RESULT_BUDGET:
        return ArrowDecision(None, status=Status.BUDGET_EXCEEDED, nodes=nodes, propagations=props)
    if res == _kernel.RESULT_SAT:
        assignment = {e: int(color[i]) for i, e in enumerate(H.hypervertices)}
        return ArrowDecision(False, ColoringWitness(assignment), nodes=nodes, propagations=props)
    used = frozenset(H.hyperedges[h] for h in np.flatnonzero(core[: len(H)]))
    return ArrowDecision(True, None, nodes=nodes, propagations=props, core=used)


ENGINES = ("compiled", "static", "python")


def arrow_hyper(H: Hypergraph, budget: int = DEFAULT_BUDGET, engine: str = "compiled",
                fixed: Optional[dict] = None) -> ArrowDecision:
    """Decide H -> (E1, E2).

    An UNSAT run also reports ``core``, a set of hyperedges that is itself
    Ramsey: the clauses of the refutation tree (compiled engines) or every
    conflict and propagation reason met (Python engine).

    ``engine`` is "compiled" (weighted branching), "static" (compiled, edge id
    order) or "python" (reference implementation, static order).

    ``fixed`` (edge id -> colour) restricts the search to colourings with
    those colours.  Then is_ramsey means "no witness extends ``fixed``" and
    ``core`` is only a core together with the fixed colours.
    """
    fixed = fixed or {}
    if engine == "compiled":
        return _compiled(H, budget, _kernel.HEUR_WEIGHTED, fixed)
    if engine == "static":
        return _compiled(H, budget, _kernel.HEUR_STATIC, fixed)
    if engine == "python":
        if fixed:
            return _Search(H, budget, fixed).run()
        return _Search(H, budget).run()
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def arrow_graph(G: Graph, pp: PairParams, budget: int = DEFAULT_BUDGET,
                engine: str = "compiled") -> ArrowDecision:
    """Decide G -> (K_r, C_ell); edges outside every copy are coloured 1."""
    dec = arrow_hyper(build_hypergraph(G, pp), budget, engine)
    if dec.witness is not None:
        full = {e: 1 for e in G.edge_ids()}
        full.update(dec.witness.assignment)
        dec.witness = ColoringWitness(full)
    return dec


def _require_decided(dec: ArrowDecision) -> bool:
    if not dec.decided:
        raise BudgetExceeded(f"arrow search exceeded its budget after {dec.propagations} propagations")
    return dec.is_ramsey


# minimisation ---------------------------------------------------------

def _violates_only(assignment: dict, H: Hypergraph, E: Hyperedge) -> bool:
    """Is the colouring a witness for H minus E?"""
    for F in H.hyperedges:
        if F == E:
            continue
        own = int(F.kind)
        if all(assignment.get(e, 3 - own) == own for e in F.edges):
            return False
    return True


def violating_colours(E: Hyperedge) -> dict:
    """The colouring of E's edges that violates E."""
    return {e: int(E.kind) for e in E.edges}


class _WitnessCache:
    """Colourings kept as rows of an array indexed by edge id.

    ``sole_violations(cur)`` returns the hyperedges of ``cur`` that some
    cached colouring violates alone: each such hyperedge cannot be removed
    from ``cur`` or any Ramsey sub-hypergraph of it.
    """

    def __init__(self, H: Hypergraph):
        self.width = (max(H.hypervertices) + 1) if H.hypervertices else 1
        k = max((len(E.edges) for E in H.hyperedges), default=1)
        self.index = {E: i for i, E in enumerate(H.hyperedges)}
        # pad with a column that is never coloured, so padding always "matches"
        self.members = np.full((len(H.hyperedges), k), self.width, np.int64)
        for i, E in enumerate(H.hyperedges):
            self.members[i, : len(E.edges)] = E.edges
        self.kind = np.array([int(E.kind) for E in H.hyperedges], np.int8)
        self.rows: list[np.ndarray] = []

    def add(self, assignment: dict) -> None:
        row = np.zeros(self.width + 1, np.int8)
        for e, c in assignment.items():
            if e < self.width:
                row[e] = c
        self.rows.append(row)

    def sole_violations(self, cur: Hypergraph) -> set:
        if not self.rows:
            return set()
        idx = np.array([self.index[E] for E in cur.hyperedges], np.int64)
        mem = self.members[idx]
        kind = self.kind[idx]
        out = set()
        for row in self.rows:
            ext = row.copy()
            ext[self.width] = -1
            cols = ext[mem]
            bad = np.all((cols == kind[:, None]) | (cols == -1), axis=1)
            hit = np.flatnonzero(bad)
            if hit.size == 1:
                out.add(cur.hyperedges[int(hit[0])])
        return out


def minimize(H: Hypergraph, budget: int = DEFAULT_BUDGET, seed: Optional[int] = None,
             engine: str = "compiled") -> Hypergraph:
    """Greedy Ramsey-minimal sub-hypergraph of a Ramsey hypergraph.

    The hypergraph first shrinks to the refutation core of a full search.
    Candidates are then visited by hyperedge order descending (shuffled when
    ``seed`` is given), and a removal that keeps the arrow is committed.  A
    removal that breaks it yields a witness colouring, which stays a witness
    for every smaller hypergraph; the cache of witnesses marks hyperedges as
    necessary without another search.

    The result is also minimal under hypervertex deletion: dropping a
    hypervertex e removes every hyperedge through e, which leaves a
    sub-hypergraph of cur minus E for some necessary E containing e.
    """
    dec = arrow_hyper(H, budget, engine)
    if not _require_decided(dec):
        raise PreconditionError("minimize needs a Ramsey hypergraph")
    cur = H.with_hyperedges(dec.core)
    order = list(reversed(H.hyperedges))
    if seed is not None:
        random.Random(seed).shuffle(order)
    cache = _WitnessCache(H)
    necessary: set = set()
    for E in order:
        if E not in cur or E in necessary:
            continue
        trial = cur.without(E)
        # cur arrows, so any witness for cur - E violates E: fixing E to its
        # own colour keeps the answer and prunes the search
        dec = arrow_hyper(trial, budget, engine, fixed=violating_colours(E))
        if _require_decided(dec):
            cur = trial
            necessary = cache.sole_violations(cur)
        else:
            cache.add(dec.witness.assignment)
            necessary.add(E)
    return cur


def minimality_probe(H: Hypergraph, budget: int = DEFAULT_BUDGET, engine: str = "compiled",
                     hypervertices: bool = True) -> list[str]:
    """Independent re-check of Ramsey-minimality; returns a list of failures."""
    problems = []
    if not _require_decided(arrow_hyper(H, budget, engine)):
        problems.append("not Ramsey")
    for E in H.hyperedges:
        if _require_decided(arrow_hyper(H.without(E), budget, engine)):
            problems.append(f"still Ramsey without hyperedge {E}")
    for e in H.hypervertices if hypervertices else ():
        if _require_decided(arrow_hyper(H.without_hypervertex(e), budget, engine)):
            problems.append(f"still Ramsey without hypervertex {edge_from_id(e)}")
    return problems


# criticality ----------------------------------------------------------

@dataclass
class CriticalityCertificate:
    ok: bool
    uncovered_vertex: Optional[int] = None
    unmatched: Optional[tuple[Hyperedge, int]] = None

    def __bool__(self):
        return self.ok


def is_star_critical(H: Hypergraph) -> CriticalityCertificate:
    """Every hypervertex lies in a cycle hyperedge, and every edge e of every
    cycle hyperedge F is met privately (E ∩ F = {e}) by some clique hyperedge."""
    covered = set()
    for F in H.cycles():
        covered.update(F.edges)
    for e in H.hypervertices:
        if e not in covered:
            return CriticalityCertificate(False, uncovered_vertex=e)
    witness = _private_meet(H.cycles(), H.cliques())
    if witness is not None:
        return CriticalityCertificate(False, unmatched=witness)
    return CriticalityCertificate(True)


def _private_meet(sources, targets) -> Optional[tuple[Hyperedge, int]]:
    for F in sources:
        fs = F.edge_set
        for e in F.edges:
            if not any(len(fs & E.edge_set) == 1 and e in E.edge_set for E in targets):
                return (F, e)
    return None


def ramsey_crit_full_check(H: Hypergraph) -> bool:
    """Both directions: each hyperedge vertex is privately met by the other type."""
    return (_private_meet(H.cycles(), H.cliques()) is None
            and _private_meet(H.cliques(), H.cycles()) is None)


def find_crit(G: Graph, pp: PairParams, budget: int = DEFAULT_BUDGET,
              seed: Optional[int] = None, engine: str = "compiled") -> Optional[Hypergraph]:
    """A Ramsey-minimal (hence *-critical) sub-hypergraph of the Ramsey
    hypergraph of G, or None when G does not arrow."""
    H = build_hypergraph(G, pp)
    dec = arrow_hyper(H, budget, engine)
    if not _require_decided(dec):
        return None
    return minimize(H, budget, seed, engine)


@dataclass
class StructureReport:
    min_degree: int
    A: frozenset
    B: frozenset
    A_independent: bool
    min_dB: int
    lam: object
    eps: object

    @property
    def ok(self) -> bool:
        return self.A_independent and self.lam <= -self.eps


def critical_structure(H: Hypergraph, pp: PairParams) -> StructureReport:
    """Degree, A/B and density facts of the underlying graph of a critical hypergraph."""
    G = underlying_graph(H)
    part = partition_AB(G, pp.r)
    amask = 0
    for v in part.A:
        amask |= 1 << v
    bmask = 0
    for v in part.B:
        bmask |= 1 << v
    indep = all(G.adj[v] & amask == 0 for v in part.A)
    min_db = min((popcount(G.adj[v] & bmask) for v in bits(G.vmask)), default=0)
    return StructureReport(G.min_degree(), part.A, part.B, indep, min_db, lam(G, pp), epsilon(pp))
